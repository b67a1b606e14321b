"""Decomposition of a rational base and Kummer degrees via Wagstaff's formula."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import as_rational, euler_phi, factorize

K_LIMIT = 10**9

EPS_TWO = Fraction(2)
EPS_ONE = Fraction(1)
EPS_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class GDecomposition:
    """``g = sign * g0**h`` with ``g0 = g1 * g2**2`` and the derived conductor."""

    g: Fraction
    h: int
    e: int
    g0: Fraction
    g1: int
    g2: Fraction
    delta: int
    n_g: int

    @property
    def negative(self) -> bool:
        return self.g < 0

    def rebuild(self) -> Fraction:
        value = self.g0**self.h
        return -value if self.negative else value


def _exponent_map(m: int) -> dict[int, int]:
    return dict(factorize(m).factors) if m > 1 else {}


def decompose(g: int | str | Fraction) -> GDecomposition:
    g = as_rational(g)
    num = _exponent_map(abs(g.numerator))
    den = _exponent_map(g.denominator)
    h = math.gcd(*num.values(), *den.values())

    g0 = Fraction(1)
    g1 = 1
    for p, k in num.items():
        g0 *= Fraction(p ** (k // h))
        if (k // h) % 2:
            g1 *= p
    for p, k in den.items():
        g0 /= p ** (k // h)
        if (k // h) % 2:
            g1 *= p
    g2_sq = g0 / g1
    g2 = Fraction(math.isqrt(g2_sq.numerator), math.isqrt(g2_sq.denominator))
    assert g2 * g2 == g2_sq

    delta = g1 if g1 % 4 == 1 else 4 * g1
    e = (h & -h).bit_length() - 1
    if g > 0:
        n_g = math.lcm(2 ** (e + 1), delta)
    elif (e == 0 and g1 % 4 == 3) or (e == 1 and g1 % 4 == 2):
        n_g = 2 * g1
    else:
        n_g = math.lcm(2 ** (e + 2), delta)
    return GDecomposition(g, h, e, g0, g1, g2, delta, n_g)


def epsilon_g(dec: GDecomposition, k: int) -> Fraction:
    if k < 1:
        raise ValueError("k must be positive")
    if k % dec.n_g == 0:
        return EPS_TWO
    if dec.negative and k % 2 == 0 and k % 2 ** (dec.e + 1):
        return EPS_HALF
    return EPS_ONE


@dataclass(frozen=True)
class ExactKummerDegree:
    k: int
    degree: int
    epsilon: Fraction


def kummer_degree(dec: GDecomposition, k: int) -> ExactKummerDegree:
    """Degree of the splitting field of ``x**k - g`` over Q."""
    if not 1 <= k <= K_LIMIT:
        raise ValueError(f"k must lie in [1, {K_LIMIT}], got {k}")
    eps = epsilon_g(dec, k)
    quotient = Fraction(euler_phi(k) * k) / (math.gcd(k, dec.h) * eps)
    if quotient.denominator != 1:
        raise ArithmeticError(f"inexact Kummer degree {quotient} for g={dec.g}, k={k}")
    return ExactKummerDegree(k, int(quotient), eps)


def kummer_degrees(dec: GDecomposition, ks: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Vectorised :func:`kummer_degree` given ``phis = phi(ks)``.

    Works with ``2 * eps`` in {4, 2, 1} so the division stays in integers.
    """
    ks = np.asarray(ks, dtype=np.int64)
    if ks.size and int(ks.max()) > K_LIMIT:
        raise ValueError(f"k exceeds {K_LIMIT}")
    two_eps = np.full(ks.shape, 2, dtype=np.int64)
    if dec.negative:
        two_eps[(ks % 2 == 0) & (ks % 2 ** (dec.e + 1) != 0)] = 1
    two_eps[ks % dec.n_g == 0] = 4
    num = 2 * np.asarray(phis, dtype=np.int64) * ks
    den = np.gcd(ks, dec.h) * two_eps
    if np.any(num % den):
        bad = int(ks[np.flatnonzero(num % den)[0]])
        raise ArithmeticError(f"inexact Kummer degree for g={dec.g}, k={bad}")
    return num // den
