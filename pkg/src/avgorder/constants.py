"""Euler-product constants B, c, P_k and the prime-average constant c_g.

Products over primes are accumulated in fixed point on Python integers
(``PREC_BITS`` fractional bits, truncating), so every block result is exact
up to a known number of units in the last place. Each product has two
routes:

* ``direct``: the truncated product itself, with a rigorous bound on the
  omitted primes.
* ``accelerated``: the same product divided by a zeta factor whose value is
  known in closed form, which leaves an Euler product converging like
  ``p**-4`` or faster.

The two routes share only the prime list, so agreement between them is a
meaningful check.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import factorize, valuation
from .kummer import GDecomposition, decompose, kummer_degrees
from .sieve import SieveRange, arithmetic_tables, blocks, primes_in, primes_upto

PREC_BITS = 200
DPS = 50
EULER_GAMMA = "0.57721566490153286060651209008240243104215933593992"

B_DEFAULT_CUTOFF = 10**6
C_DEFAULT_CUTOFF = 10**8
CG_DEFAULT_CUTOFF = 10**6
PRODUCT_BLOCK = 1 << 22

_ONE = 1 << PREC_BITS


def _mp(x) -> mpmath.mpf:
    with mpmath.workdps(DPS):
        return mpmath.mpf(x)


def default_workers() -> int:
    return max(1, int(os.environ.get("AVGORDER_WORKERS", "1")))


@dataclass(frozen=True)
class ConstantValue:
    """A real constant with ``|true - value| <= tail_bound``."""

    name: str
    value: mpmath.mpf
    tail_bound: mpmath.mpf
    cutoff: int
    method: str

    @property
    def lower(self) -> mpmath.mpf:
        with mpmath.workdps(DPS):
            return self.value - self.tail_bound

    @property
    def upper(self) -> mpmath.mpf:
        with mpmath.workdps(DPS):
            return self.value + self.tail_bound

    def certified_digits(self, max_digits: int = 40) -> str:
        return certified_digits(self.lower, self.upper, max_digits)

    def contains(self, x) -> bool:
        with mpmath.workdps(DPS):
            return self.lower <= mpmath.mpf(x) <= self.upper


def certified_digits(lower, upper, max_digits: int = 40) -> str:
    """Longest decimal truncation shared by every real in ``[lower, upper]``.

    Only nonnegative intervals are supported.
    """
    with mpmath.workdps(DPS + 10):
        lower, upper = mpmath.mpf(lower), mpmath.mpf(upper)
        if lower < 0 or upper < lower:
            raise ValueError("certified_digits needs 0 <= lower <= upper")
        best = None
        for d in range(max_digits + 1):
            scale = mpmath.mpf(10) ** d
            lo_i, hi_i = int(mpmath.floor(lower * scale)), int(mpmath.floor(upper * scale))
            if lo_i != hi_i:
                break
            best = (d, hi_i)
    if best is None:
        return ""
    d, digits = best
    if d == 0:
        return str(digits)
    whole, frac = divmod(digits, 10**d)
    return f"{whole}.{frac:0{d}d}"


# Per-prime factors (numerator, denominator) of each Euler product.
def _b_direct(p):
    d = (p - 1) * (p - 1) * (p + 1)
    return d - 1, d


def _b_accelerated(p):
    d = (p - 1) * (p - 1) * (p + 1) * (p * p * p - 1)
    return d - (p * p + p - 1), d


def _c_direct(p):
    p3 = p * p * p
    return p3 - p - 1, p3 - 1


def _c_accelerated(p):
    d = (p * p * p - 1) * (p * p - 1)
    return d - 1, d


def _odd_direct(q):
    d = (q - 1) * (q - 1)
    return d - 1, d


def _odd_accelerated(q):
    d = (q - 1) ** 3 * (q + 1)
    return d - (2 * q - 1), d


_FACTORS = {
    ("B", "direct"): _b_direct,
    ("B", "accelerated"): _b_accelerated,
    ("c", "direct"): _c_direct,
    ("c", "accelerated"): _c_accelerated,
    ("C_odd", "direct"): _odd_direct,
    ("C_odd", "accelerated"): _odd_accelerated,
}


def _product_block(args: tuple[str, str, int, int, int]) -> tuple[int, int]:
    name, method, lo, hi, cutoff = args
    factor = _FACTORS[name, method]
    base = primes_upto(math.isqrt(max(cutoff, 4)))
    acc = _ONE
    primes = primes_in(SieveRange(lo, hi), base).tolist()
    if name == "C_odd":
        primes = [p for p in primes if p > 2]
    for p in primes:
        num, den = factor(p)
        acc = acc * num // den
    return acc, len(primes)


def _fixed_product(name: str, method: str, cutoff: int, workers: int) -> tuple[int, int]:
    """Truncated fixed-point product over primes ``<= cutoff``; also returns
    the number of truncating steps."""
    tasks = [(name, method, b.lo, b.hi, cutoff) for b in blocks(2, cutoff + 1, PRODUCT_BLOCK)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_product_block, tasks))
    else:
        parts = [_product_block(t) for t in tasks]
    acc, steps = _ONE, 0
    for part, n in parts:
        acc = acc * part >> PREC_BITS
        steps += n + 1
    return acc, steps


def _tail_sum(name: str, method: str, n: int) -> mpmath.mpf:
    """Upper bound for the sum of ``1 - factor(p)`` over primes ``p > n``."""
    with mpmath.workdps(DPS):
        m = mpmath.mpf(n - 1)
        if method == "accelerated":
            return {"B": 1 / (3 * m**3), "c": 1 / (4 * m**4), "C_odd": 1 / m**2}[name]
        if name == "B":
            return 1 / (2 * m**2)
        if name == "C_odd":
            return 1 / m
        # sum_{p>n} p/(p^3-1): partial summation against explicit bounds for pi(t).
        L = mpmath.log(n)
        if n >= 355991:
            s = (1 + 1 / L + mpmath.mpf("5.02") / L**2) / (n * L)
        else:
            s = mpmath.mpf("2.51012") / (n * L)
        return s * (1 + 1 / (mpmath.mpf(n) ** 3 - 1))


def _prefactor(name: str, method: str) -> mpmath.mpf:
    with mpmath.workdps(DPS + 10):
        exp_gamma = mpmath.exp(-mpmath.mpf(EULER_GAMMA))
        if method == "direct":
            return {"B": exp_gamma, "c": mpmath.mpf(1), "C_odd": mpmath.mpf(1)}[name]
        return {
            "B": exp_gamma / mpmath.zeta(3),
            "c": 6 / mpmath.pi**2,
            "C_odd": 8 / mpmath.pi**2,
        }[name]


def _euler_product(name: str, prime_cutoff: int, method: str, workers: int | None) -> ConstantValue:
    if method not in ("direct", "accelerated"):
        raise ValueError(f"unknown method {method!r}")
    if prime_cutoff < 100:
        raise ValueError("prime cutoff must be at least 100")
    workers = default_workers() if workers is None else workers
    acc, steps = _fixed_product(name, method, prime_cutoff, workers)
    with mpmath.workdps(DPS):
        pre = _prefactor(name, method)
        partial = mpmath.mpf(acc) / _ONE
        value = pre * partial
        rounding = pre * (steps + 1) / _ONE + abs(value) * mpmath.mpf(10) ** (5 - DPS)
        tail = value * _tail_sum(name, method, prime_cutoff) + rounding
    return ConstantValue(name, value, tail, prime_cutoff, method)


def euler_product_B(prime_cutoff: int = B_DEFAULT_CUTOFF, method: str = "direct",
                    workers: int | None = None) -> ConstantValue:
    """``exp(-gamma) * prod_p (1 - 1/((p-1)**2 (p+1)))`` over ``p <= prime_cutoff``."""
    return _euler_product("B", prime_cutoff, method, workers)


def euler_product_c(prime_cutoff: int = C_DEFAULT_CUTOFF, method: str = "direct",
                    workers: int | None = None) -> ConstantValue:
    """``prod_p (1 - p/(p**3 - 1))`` over ``p <= prime_cutoff``."""
    return _euler_product("c", prime_cutoff, method, workers)


def odd_prime_product(prime_cutoff: int = B_DEFAULT_CUTOFF, method: str = "accelerated",
                      workers: int | None = None) -> ConstantValue:
    """``prod_{q > 2} (1 - 1/(q-1)**2)``."""
    return _euler_product("C_odd", prime_cutoff, method, workers)


# ---------------------------------------------------------------------------
# Local factors F(p, t) and F(p)


def f_prime_power(p: int, j: int, h: int) -> Fraction:
    if j == 0:
        return Fraction(1)
    return -Fraction(p) ** (1 - 3 * j + min(j, valuation(h, p)))


def F_partial(p: int, t: int, h: int) -> Fraction:
    """``sum_{j < t} f(p**j)``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return sum((f_prime_power(p, j, h) for j in range(t)), Fraction(0))


def F_full(p: int, h: int) -> Fraction:
    v = valuation(h, p)
    head = sum((Fraction(p) ** (1 - 2 * j) for j in range(1, v + 1)), Fraction(0))
    return 1 - head - Fraction(p) ** (1 - 2 * v) / (p**3 - 1)


def _generic_factor(p: int) -> Fraction:
    return 1 - Fraction(p, p**3 - 1)


@dataclass(frozen=True)
class CgValue:
    g: Fraction
    rational_multiplier: Fraction | None
    value: mpmath.mpf
    tail_bound: mpmath.mpf
    mode: str
    cutoff: int


def cg_multiplier(dec: GDecomposition) -> Fraction:
    """Exact rational ``r`` with ``c_g = r * c``."""
    h, n = dec.h, dec.n_g
    r = Fraction(1)
    for p, _ in factorize(h):
        r *= F_full(p, h) / _generic_factor(p)
    prod = Fraction(1)
    for p, v in factorize(n):
        prod *= 1 - F_partial(p, v, h) / F_full(p, h)
    bracket = 1 + prod
    if dec.negative and dec.e > 0:
        bracket -= (F_partial(2, dec.e + 1, h) - 1) / (2 * F_full(2, h))
    return r * bracket


def cg_closed_form(g: int | str | Fraction | GDecomposition,
                   prime_cutoff: int = CG_DEFAULT_CUTOFF,
                   workers: int | None = None) -> CgValue:
    dec = g if isinstance(g, GDecomposition) else decompose(g)
    r = cg_multiplier(dec)
    c = euler_product_c(prime_cutoff, method="accelerated", workers=workers)
    with mpmath.workdps(DPS):
        rm = mpmath.mpf(r.numerator) / r.denominator
        value = rm * c.value
        tail = abs(rm) * c.tail_bound
    return CgValue(dec.g, r, value, tail, "closed_form", prime_cutoff)


def _series_tail(h: int, K: int) -> Fraction:
    # |term_k| <= 2 (k,h)/k^2 and (k,h) = sum_{m | (k,h)} phi(m)
    total = Fraction(0)
    for m in _divisors(h):
        J = K // m
        tail = Fraction(1, J) if J >= 1 else Fraction(2)
        total += Fraction(_phi(m), m * m) * tail
    return 2 * total


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def _phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def cg_series(g: int | str | Fraction | GDecomposition, K: int,
              tables: dict | None = None) -> CgValue:
    """Partial sum over ``k <= K`` of ``phi(k) rad(k) (-1)**omega(k) / (k**2 D_g(k))``.

    ``tables`` may carry precomputed :func:`avgorder.sieve.arithmetic_tables`
    of length at least ``K + 1`` to share the sieve across several bases.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    dec = g if isinstance(g, GDecomposition) else decompose(g)
    if tables is None or len(tables["phi"]) <= K:
        tables = arithmetic_tables(K)
    phi = tables["phi"][1 : K + 1]
    rad = tables["rad"][1 : K + 1].tolist()
    omega = tables["omega"][1 : K + 1].tolist()
    degrees = kummer_degrees(dec, range(1, K + 1), phi).tolist()
    phi = phi.tolist()
    acc = 0
    for k, (ph, ra, om, deg) in enumerate(zip(phi, rad, omega, degrees), start=1):
        t = ((ph * ra) << PREC_BITS) // (k * k * deg)
        acc += -t if om & 1 else t
    with mpmath.workdps(DPS):
        value = mpmath.mpf(acc) / _ONE
        tail = _series_tail(dec.h, K)
        bound = mpmath.mpf(tail.numerator) / tail.denominator + mpmath.mpf(K + 1) / _ONE
    return CgValue(dec.g, None, value, bound, "series", K)


# ---------------------------------------------------------------------------
# P_k densities


def _odd_multiplier(k: int) -> Fraction:
    r = Fraction(1)
    for q, _ in factorize(k):
        if q > 2:
            r *= Fraction(q - 1, q - 2)
    return r


def P_k_constant(k: int, prime_cutoff: int = B_DEFAULT_CUTOFF,
                 odd_product: ConstantValue | None = None) -> ConstantValue:
    """``(exp(-gamma)/k) prod_{q>2} (1 - 1/(q-1)**2) prod_{q | k, q > 2} (q-1)/(q-2)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if odd_product is None:
        odd_product = odd_prime_product(prime_cutoff)
    m = _odd_multiplier(k)
    with mpmath.workdps(DPS):
        scale = mpmath.exp(-mpmath.mpf(EULER_GAMMA)) * m.numerator / (m.denominator * k)
        value = scale * odd_product.value
        tail = scale * odd_product.tail_bound
    return ConstantValue(f"P_{k}", value, tail, odd_product.cutoff, odd_product.method)


def pk_partial_sums(Ks: list[int], prime_cutoff: int = B_DEFAULT_CUTOFF,
                    odd_product: ConstantValue | None = None) -> list[tuple[int, mpmath.mpf]]:
    """``sum_{k <= K} P_k / (2k)`` for each ``K`` in ``Ks`` (ascending)."""
    Ks = sorted(Ks)
    if odd_product is None:
        odd_product = odd_prime_product(prime_cutoff)
    top = Ks[-1]
    # odd-part multiplier num/den tables for k <= top
    num = [1] * (top + 1)
    den = [1] * (top + 1)
    for q in primes_upto(top).tolist():
        if q == 2:
            continue
        for i in range(q, top + 1, q):
            num[i] *= q - 1
            den[i] *= q - 2
    out = []
    acc = 0
    wanted = iter(Ks)
    nxt = next(wanted)
    for k in range(1, top + 1):
        acc += (num[k] << PREC_BITS) // (den[k] * k * k)
        while k == nxt:
            with mpmath.workdps(DPS):
                s = mpmath.mpf(acc) / _ONE
                val = mpmath.exp(-mpmath.mpf(EULER_GAMMA)) * odd_product.value * s / 2
            out.append((k, val))
            nxt = next(wanted, None)
    return out
