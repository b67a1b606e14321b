"""Average multiplicative orders: exact orders and Kummer degrees, the
Euler-product constants B, c and c_g, and sieve-driven surveys."""

__version__ = "0.1.0"

from .arith import (
    Factorization,
    as_rational,
    carmichael_lambda,
    factorize,
    index_mod_prime,
    is_prime,
    multiplicative_basics,
    order_mod,
)
from .constants import (
    ConstantValue,
    CgValue,
    F_full,
    F_partial,
    P_k_constant,
    cg_closed_form,
    cg_multiplier,
    cg_series,
    euler_product_B,
    euler_product_c,
)
from .kummer import GDecomposition, decompose, epsilon_g, kummer_degree
from .survey import (
    SurveyReport,
    composite_average,
    index_density,
    low_order_census,
    prime_average,
    sk_ek_stats,
    survey,
)
