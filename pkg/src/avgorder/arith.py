"""Exact integer arithmetic: factorization, multiplicative functions, orders.

Everything here works on Python integers and :class:`fractions.Fraction`, so
results are exact. Moduli are supported up to 64-bit word size.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterator

WORD_LIMIT = (1 << 64) - 1
_TRIAL_BOUND = 1 << 12

# Deterministic Miller-Rabin witnesses for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = _small_primes(_TRIAL_BOUND)


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition ``value = prod(p**e for p, e in factors)``."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("Factorization value must be positive")
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"non-canonical factor list {self.factors!r}")
            prod *= p**e
            last = p
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n < 3.3e24`` (covers 64-bit words)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:40]:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_large(n: int, out: dict[int, int], rng: random.Random) -> None:
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_brent(m, rng)
        stack += [d, m // d]


def factorize(n: int) -> Factorization:
    """Factor ``1 <= n <= 2**64 - 1``.

    Trial division by primes below 4096, then Miller-Rabin and Pollard-Brent
    on the cofactor. The rho walk is seeded, so results never depend on
    global random state.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    if n > WORD_LIMIT:
        raise ValueError(f"{n} exceeds the 64-bit word limit")
    found: dict[int, int] = {}
    m = n
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m < _TRIAL_BOUND * _TRIAL_BOUND:
            found[m] = found.get(m, 0) + 1
        else:
            _split_large(m, found, random.Random(m))
    return Factorization(n, tuple(sorted(found.items())))


def _as_factorization(n: int | Factorization) -> Factorization:
    return n if isinstance(n, Factorization) else factorize(n)


def carmichael_prime_power(p: int, e: int) -> int:
    if p == 2:
        return 1 if e == 1 else 2 if e == 2 else 1 << (e - 2)
    return p ** (e - 1) * (p - 1)


@dataclass(frozen=True)
class Basics:
    phi: int
    carmichael: int
    rad: int
    omega: int
    tau: int


def multiplicative_basics(n: int | Factorization) -> Basics:
    """Euler phi, Carmichael lambda, radical, omega and divisor count."""
    f = _as_factorization(n)
    phi = lam = rad = tau = 1
    for p, e in f:
        phi *= p ** (e - 1) * (p - 1)
        lam = math.lcm(lam, carmichael_prime_power(p, e))
        rad *= p
        tau *= e + 1
    return Basics(phi, lam, rad, len(f.factors), tau)


def euler_phi(n: int | Factorization) -> int:
    return multiplicative_basics(n).phi


def carmichael_lambda(n: int | Factorization) -> int:
    return multiplicative_basics(n).carmichael


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def as_rational(g: int | str | Fraction) -> Fraction:
    """Parse an admissible base ``g`` (``"a"`` or ``"a/b"``), rejecting 0 and +-1."""
    if isinstance(g, str):
        text = g.strip()
        if not text:
            raise ValueError("empty base")
        try:
            g = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse base {text!r}") from exc
        if g.denominator != 1 and "/" not in text:
            raise ValueError(f"base must be an integer or a/b, got {text!r}")
    g = Fraction(g)
    if g in (0, 1, -1):
        raise ValueError(f"base g must not be 0 or +-1 (got {g})")
    return g


def _reduce_order(base: int, modulus: int, group_exponent: int,
                  primes: list[tuple[int, int]]) -> int:
    # primes: factorization of group_exponent
    order = group_exponent
    for q, e in primes:
        order //= q**e
        t = pow(base, order, modulus)
        while t != 1:
            t = pow(t, q, modulus)
            order *= q
    return order


def _lambda_factorization(f: Factorization) -> list[tuple[int, int]]:
    exps: dict[int, int] = {}
    for p, e in f:
        if p == 2:
            parts = [] if e == 1 else [(2, 1 if e == 2 else e - 2)]
        else:
            parts = list(factorize(p - 1)) + ([(p, e - 1)] if e > 1 else [])
        for q, k in parts:
            exps[q] = max(exps.get(q, 0), k)
    return sorted(exps.items())


def order_mod(g: int | str | Fraction, n: int) -> int:
    """Multiplicative order of ``g = a/b`` modulo ``n``.

    For a prime ``n`` dividing ``a*b`` the convention order 1 applies.
    Composite moduli sharing a factor with ``a*b`` raise ``ValueError``.
    """
    g = as_rational(g)
    n = int(n)
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    if n == 1:
        return 1
    a, b = g.numerator, g.denominator
    if math.gcd(a * b, n) != 1:
        if is_prime(n):
            return 1
        raise ValueError(
            f"order of {g} mod {n} is undefined: modulus shares a factor with {a * b}"
        )
    f = factorize(n)
    base = a * pow(b, -1, n) % n
    lam = carmichael_lambda(f)
    return _reduce_order(base, n, lam, _lambda_factorization(f))


def order_mod_prime(residue: int, p: int, p_minus_1: list[tuple[int, int]]) -> int:
    """Order of a unit ``residue`` mod prime ``p`` given the factorization of p - 1."""
    return _reduce_order(residue % p, p, p - 1, p_minus_1)


def index_mod_prime(g: int | str | Fraction, p: int) -> int:
    """Index ``(p - 1) / ord_g(p)``; equals ``p - 1`` at primes dividing ``a*b``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return (p - 1) // order_mod(g, p)


def lcm_all(values) -> int:
    return reduce(math.lcm, values, 1)
