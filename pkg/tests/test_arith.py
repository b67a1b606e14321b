import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from avgorder.arith import (
    Factorization,
    as_rational,
    carmichael_lambda,
    factorize,
    index_mod_prime,
    is_prime,
    multiplicative_basics,
    order_mod,
)

from conftest import brute_lambda, brute_order


def test_factorize_examples():
    assert factorize(1).factors == ()
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert sympy.isprime(2**31 - 1)
    assert factorize(2**31 - 1).factors == ((2147483647, 1),)


@pytest.mark.parametrize("n", [2**62 + 135, 2**63 - 1, 2**64 - 59, 600851475143,
                               1000000016000000063, 4611686014132420609])
def test_factorize_word_size(n):
    assert dict(factorize(n).factors) == sympy.factorint(n)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=1, max_value=2**63 - 1))
def test_factorize_matches_sympy(n):
    f = factorize(n)
    assert dict(f.factors) == sympy.factorint(n)
    assert math.prod(p**e for p, e in f) == n


def test_factorize_rejects_out_of_range():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(2**64)


def test_factorization_invariants_enforced():
    with pytest.raises(ValueError):
        Factorization(12, ((3, 1), (2, 2)))
    with pytest.raises(ValueError):
        Factorization(12, ((2, 1), (3, 1)))


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**19))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_basics_examples():
    b = multiplicative_basics(8)
    assert b.carmichael == 2
    b = multiplicative_basics(15)
    assert (b.carmichael, b.phi, b.rad, b.omega, b.tau) == (4, 8, 15, 2, 4)
    b = multiplicative_basics(1)
    assert (b.carmichael, b.phi, b.rad, b.omega, b.tau) == (1, 1, 1, 0, 1)


@pytest.mark.parametrize("n", range(1, 200))
def test_carmichael_brute_force(n):
    assert carmichael_lambda(n) == brute_lambda(n)
    assert multiplicative_basics(n).phi == sum(1 for u in range(1, n + 1) if math.gcd(u, n) == 1)


def test_carmichael_two_powers():
    assert [carmichael_lambda(2**k) for k in range(1, 8)] == [1, 2, 2, 4, 8, 16, 32]


def test_basics_multiplicative_on_random_coprime_pairs():
    rng = random.Random(7)
    checked = 0
    while checked < 10_000:
        m, n = rng.randrange(1, 10**6), rng.randrange(1, 10**6)
        if math.gcd(m, n) != 1:
            continue
        bm, bn, bmn = (multiplicative_basics(v) for v in (m, n, m * n))
        assert bmn.phi == bm.phi * bn.phi
        assert bmn.rad == bm.rad * bn.rad
        assert bmn.omega == bm.omega + bn.omega
        assert bmn.tau == bm.tau * bn.tau
        assert bmn.carmichael == math.lcm(bm.carmichael, bn.carmichael)
        checked += 1


def test_order_examples():
    assert order_mod(2, 7) == 3
    assert order_mod(2, 9) == 6
    assert order_mod(Fraction(3, 2), 5) == brute_order(Fraction(3, 2), 5) == 2
    assert order_mod(2, 1) == 1


def test_order_bad_prime_convention_and_composite_refusal():
    assert order_mod(2, 2) == 1
    assert order_mod(Fraction(3, 5), 5) == 1
    with pytest.raises(ValueError):
        order_mod(2, 6)
    with pytest.raises(ValueError):
        order_mod(Fraction(1, 3), 12)


def test_order_rejects_trivial_bases():
    for g in (0, 1, -1):
        with pytest.raises(ValueError):
            order_mod(g, 7)


@pytest.mark.parametrize("g", [2, 3, -3, 10, Fraction(5, 7), Fraction(-2, 9)])
def test_order_is_lcm_over_prime_powers(g):
    g = Fraction(g)
    ab = abs(g.numerator) * g.denominator
    for n in range(2, 3000):
        if math.gcd(n, ab) != 1:
            continue
        parts = [order_mod(g, p**e) for p, e in factorize(n)]
        assert order_mod(g, n) == math.lcm(*parts)


def test_order_large_modulus():
    p = 2**61 - 1
    assert order_mod(3, p) == sympy.n_order(3, p)
    n = 1000000007 * 998244353
    assert order_mod(5, n) == sympy.n_order(5, n)


def test_index_mod_prime():
    assert index_mod_prime(2, 7) == 2
    assert index_mod_prime(2, 11) == 1
    assert index_mod_prime(2, 2) == 1
    assert index_mod_prime(Fraction(1, 3), 3) == 2
    with pytest.raises(ValueError):
        index_mod_prime(2, 9)


def test_as_rational_parsing():
    assert as_rational("3/2") == Fraction(3, 2)
    assert as_rational("-4") == -4
    assert as_rational("6/4") == Fraction(3, 2)
    for bad in ("1", "-1", "0", "2/2", "x", "1.5", ""):
        with pytest.raises(ValueError):
            as_rational(bad)
