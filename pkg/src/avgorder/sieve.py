"""Segmented sieves over half-open blocks ``[lo, hi)``.

Blocks are the unit of parallel work in :mod:`avgorder.survey` and
:mod:`avgorder.constants`; block boundaries come from :func:`blocks`, which
depends only on the range and block size, never on the worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_BLOCK = 1 << 18


def primes_upto(limit: int) -> np.ndarray:
    """All primes ``<= limit`` by a plain odd-only sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_odd_prime = np.ones((limit - 1) // 2, dtype=bool)  # 3, 5, 7, ...
    for i in range(0, (math.isqrt(limit) - 1) // 2):
        if is_odd_prime[i]:
            p = 2 * i + 3
            is_odd_prime[(p * p - 3) // 2 :: p] = False
    odd = 2 * np.flatnonzero(is_odd_prime).astype(np.int64) + 3
    return np.concatenate(([2], odd)).astype(np.int64)


@dataclass(frozen=True)
class SieveRange:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 1 or self.hi < self.lo:
            raise ValueError(f"bad block [{self.lo}, {self.hi})")

    def __len__(self) -> int:
        return self.hi - self.lo


def blocks(lo: int, hi: int, size: int = DEFAULT_BLOCK) -> list[SieveRange]:
    """Cover ``[lo, hi)`` exactly once by consecutive blocks of ``size``."""
    return [SieveRange(s, min(s + size, hi)) for s in range(lo, hi, size)]


def primes_in(block: SieveRange, base: np.ndarray | None = None) -> np.ndarray:
    """Primes in ``[block.lo, block.hi)``."""
    lo, hi = block.lo, block.hi
    if hi <= 2:
        return np.zeros(0, dtype=np.int64)
    root = math.isqrt(hi - 1)
    if base is None:
        base = primes_upto(root)
    flags = np.ones(hi - lo, dtype=bool)
    for p in base:
        p = int(p)
        if p > root:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo :: p] = False
    if lo < 2:
        flags[: 2 - lo] = False
    return np.flatnonzero(flags).astype(np.int64) + lo


@dataclass
class BlockFactors:
    """Factorizations of every integer in a block, in CSR layout.

    The factors of ``lo + i`` are ``primes[indptr[i]:indptr[i+1]]`` with the
    matching ``exponents``, primes ascending.
    """

    lo: int
    hi: int
    indptr: np.ndarray
    primes: np.ndarray
    exponents: np.ndarray


def factor_block(block: SieveRange, base: np.ndarray | None = None) -> BlockFactors:
    """Factor all integers of a block by striding over the base primes."""
    lo, hi = block.lo, block.hi
    root = math.isqrt(max(hi - 1, 1))
    if base is None:
        base = primes_upto(root)
    rem = np.arange(lo, hi, dtype=np.int64)
    pos_parts, p_parts, e_parts = [], [], []
    for p in base:
        p = int(p)
        if p > root:
            break
        idx = np.arange(-(-lo // p) * p - lo, hi - lo, p, dtype=np.int64)
        if idx.size == 0:
            continue
        exps = np.zeros(idx.size, dtype=np.int64)
        active = np.arange(idx.size)
        while active.size:
            rem[idx[active]] //= p
            exps[active] += 1
            active = active[rem[idx[active]] % p == 0]
        pos_parts.append(idx)
        p_parts.append(np.full(idx.size, p, dtype=np.int64))
        e_parts.append(exps)
    big = np.flatnonzero(rem > 1)
    pos_parts.append(big)
    p_parts.append(rem[big])
    e_parts.append(np.ones(big.size, dtype=np.int64))

    pos = np.concatenate(pos_parts)
    order = np.argsort(pos, kind="stable")
    counts = np.bincount(pos, minlength=hi - lo)
    indptr = np.zeros(hi - lo + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return BlockFactors(lo, hi, indptr, np.concatenate(p_parts)[order],
                        np.concatenate(e_parts)[order])


def arithmetic_tables(limit: int) -> dict[str, np.ndarray]:
    """``phi``, ``rad`` and ``omega`` for ``0 <= k <= limit`` (index 0 unused)."""
    phi = np.arange(limit + 1, dtype=np.int64)
    rad = np.ones(limit + 1, dtype=np.int64)
    omega = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_upto(limit):
        p = int(p)
        phi[p::p] //= p
        phi[p::p] *= p - 1
        rad[p::p] *= p
        omega[p::p] += 1
    return {"phi": phi, "rad": rad, "omega": omega}
