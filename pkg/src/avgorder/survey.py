"""Sieve-driven empirical statistics of multiplicative orders.

One pass over the primes up to ``x`` computes ``ord_g(p)`` from the factored
``p - 1`` of each block, and feeds the prime average, index densities, the
low-order census and the ``S_k``/``E_k`` partition. A second pass over all
``n <= x`` assembles ``ord_g(n)`` as an lcm of prime-power orders.

All accumulators are exact integers (``E_k`` sums are fixed point with
``EK_BITS`` fractional bits), so merging block results is order-free and
reports do not depend on the number of workers.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import __version__
from .arith import as_rational
from .constants import P_k_constant, default_workers, euler_product_B, odd_prime_product
from .sieve import DEFAULT_BLOCK, SieveRange, blocks, factor_block, primes_in, primes_upto

SCHEMA = "avgorder.survey/1"
EK_BITS = 160
DEFAULT_LS = (1, 2, 3, 4, 5, 6, 8, 10, 12, 16)
DEFAULT_D = 24
DEFAULT_KMAX = 12


def _bad_primes(g: Fraction) -> list[int]:
    from .arith import factorize

    ab = abs(g.numerator) * g.denominator
    return [p for p, _ in factorize(ab)] if ab > 1 else []


# ---------------------------------------------------------------------------
# Prime pass


def _prime_block(task):
    a, b, lo, hi, k_max, Ls, want_orders = task
    block = SieveRange(lo, hi)
    base = primes_upto(math.isqrt(hi))
    primes = primes_in(block, base)
    fac = factor_block(SieveRange(lo - 1, hi - 1), base)
    indptr = fac.indptr.tolist()
    fp = fac.primes.tolist()
    fe = fac.exponents.tolist()

    ab = abs(a) * b
    orders = []
    bad = 0
    for p in primes.tolist():
        if ab % p == 0:
            orders.append(1)
            bad += 1
            continue
        gm = a % p if b == 1 else a * pow(b, -1, p) % p
        o = p - 1
        row = p - lo
        for j in range(indptr[row], indptr[row + 1]):
            q = fp[j]
            o //= q ** fe[j]
            t = pow(gm, o, p)
            while t != 1:
                t = pow(t, q, p)
                o *= q
        orders.append(o)

    ords = np.array(orders, dtype=np.int64)
    index = (primes - 1) // np.maximum(ords, 1)
    out = {
        "prime_count": int(primes.size),
        "bad_primes": bad,
        "sum_orders": int(ords.sum(dtype=np.int64)) if ords.size else 0,
        "sum_p_minus_1": int((primes - 1).sum()) if primes.size else 0,
        "densities": [int(np.count_nonzero(index % k == 0)) for k in range(1, k_max + 1)],
        "census": [int(np.count_nonzero(index >= L)) for L in Ls],
    }

    if want_orders:
        out["orders"] = (primes, ords)
    return out


def _ek_sums(primes_by_k: dict[int, list[int]], x: int) -> dict[int, int]:
    one = 1 << EK_BITS
    out = {}
    for k, ps in primes_by_k.items():
        acc = 0
        for p in ps:
            q = p
            while q <= x:
                acc += one // q
                q *= p
        out[k] = acc
    return out


def _sk_block(task):
    lo, hi, x, D = task
    primes = primes_in(SieveRange(lo, hi)).tolist()
    by_k: dict[int, list[int]] = {}
    for p in primes:
        if p > 2:
            by_k.setdefault(math.gcd(p - 1, D) // 2, []).append(p)
    return {k: len(ps) for k, ps in by_k.items()}, _ek_sums(by_k, x)


def _run(fn, tasks, workers, initializer=None, initargs=()):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=initializer,
                                 initargs=initargs) as pool:
            return list(pool.map(fn, tasks))
    if initializer is not None:
        initializer(*initargs)
    return [fn(t) for t in tasks]


@dataclass
class PrimeStats:
    x: int
    prime_count: int = 0
    bad_primes: int = 0
    sum_orders: int = 0
    sum_p_minus_1: int = 0
    densities: dict[int, int] = field(default_factory=dict)
    census: dict[int, int] = field(default_factory=dict)
    sk_counts: dict[int, int] = field(default_factory=dict)
    ek_fixed: dict[int, int] = field(default_factory=dict)
    orders: np.ndarray | None = None


def prime_pass(g, x: int, *, k_max: int = DEFAULT_KMAX, Ls=DEFAULT_LS, D: int | None = DEFAULT_D,
               want_orders: bool = False, workers: int | None = None,
               block_size: int = DEFAULT_BLOCK) -> PrimeStats:
    """One sieve pass over primes ``p <= x`` collecting every prime statistic."""
    g = as_rational(g)
    if x < 2:
        raise ValueError("x must be >= 2")
    if k_max < 1 or any(L < 1 for L in Ls):
        raise ValueError("k_max and every L must be >= 1")
    if D is not None and (D < 2 or D % 2):
        raise ValueError(f"D must be a positive even integer, got {D}")
    workers = default_workers() if workers is None else workers
    Ls = tuple(Ls)
    tasks = [(g.numerator, g.denominator, r.lo, r.hi, k_max, Ls, want_orders)
             for r in blocks(2, x + 1, block_size)]
    parts = _run(_prime_block, tasks, workers)

    stats = PrimeStats(x, densities={k: 0 for k in range(1, k_max + 1)},
                       census={L: 0 for L in Ls})
    table = np.ones(x + 1, dtype=np.int64) if want_orders else None
    for part in parts:
        stats.prime_count += part["prime_count"]
        stats.bad_primes += part["bad_primes"]
        stats.sum_orders += part["sum_orders"]
        stats.sum_p_minus_1 += part["sum_p_minus_1"]
        for k, c in zip(stats.densities, part["densities"]):
            stats.densities[k] += c
        for L, c in zip(Ls, part["census"]):
            stats.census[L] += c
        if table is not None:
            ps, os_ = part["orders"]
            table[ps] = os_
    if D is not None:
        sk_parts = _run(_sk_block, [(r.lo, r.hi, x, D) for r in blocks(2, x + 1, block_size)],
                        workers)
        counts: dict[int, int] = {}
        ek: dict[int, int] = {}
        for part_counts, part_ek in sk_parts:
            for k, c in part_counts.items():
                counts[k] = counts.get(k, 0) + c
            for k, v in part_ek.items():
                ek[k] = ek.get(k, 0) + v
        stats.sk_counts = dict(sorted(counts.items()))
        stats.ek_fixed = dict(sorted(ek.items()))
    stats.orders = table
    return stats


# ---------------------------------------------------------------------------
# Composite pass

_ORDER_TABLE: np.ndarray | None = None


def _set_order_table(table):
    global _ORDER_TABLE
    _ORDER_TABLE = table


def _lift_order(gm: int, p: int, alpha: int, base_order: int) -> int:
    m = p**alpha
    o = base_order
    t = pow(gm, o, m)
    while t != 1:
        t = pow(t, p, m)
        o *= p
    return o


def _fill_prime_powers(table: np.ndarray, g: Fraction, x: int, bad: list[int]) -> None:
    a, b = g.numerator, g.denominator
    for p in primes_upto(math.isqrt(x)).tolist():
        if p in bad:
            continue
        alpha, m = 2, p * p
        while m <= x:
            gm = a * pow(b, -1, m) % m
            table[m] = _lift_order(gm, p, alpha, int(table[p]))
            alpha += 1
            m *= p


def _composite_block(task):
    lo, hi, bad = task
    table = _ORDER_TABLE
    fac = factor_block(SieveRange(lo, hi))
    counts = np.diff(fac.indptr)
    rows = np.flatnonzero(counts)
    starts = fac.indptr[:-1][rows]

    pp = fac.primes ** fac.exponents
    lam_pp = np.where(fac.primes == 2,
                      np.where(fac.exponents <= 2, fac.exponents, pp // 4),
                      pp // fac.primes * (fac.primes - 1))
    lam = np.ones(hi - lo, dtype=np.int64)
    if rows.size:
        lam[rows] = np.lcm.reduceat(lam_pp, starts)

    coprime = np.ones(hi - lo, dtype=bool)
    for q in bad:
        first = -(-lo // q) * q
        coprime[first - lo :: q] = False
    ords = np.ones(hi - lo, dtype=np.int64)
    if rows.size:
        ords[rows] = np.lcm.reduceat(table[pp], starts)
    return {
        "sum_orders": int(ords[coprime].sum(dtype=np.int64)),
        "coprime_count": int(np.count_nonzero(coprime)),
        "sum_lambda": int(lam.sum(dtype=np.int64)),
    }


@dataclass
class CompositeStats:
    x: int
    sum_orders: int
    coprime_count: int
    sum_lambda: int

    @property
    def t_average(self) -> Fraction:
        return Fraction(self.sum_orders, self.x)

    @property
    def lambda_average(self) -> Fraction:
        return Fraction(self.sum_lambda, self.x)


def composite_pass(g, x: int, *, workers: int | None = None, block_size: int = DEFAULT_BLOCK,
                   order_table: np.ndarray | None = None) -> CompositeStats:
    """Exact ``sum ord_g(n)`` over ``n <= x`` coprime to ``g`` and ``sum lambda(n)`` over ``n <= x``."""
    g = as_rational(g)
    if x < 1:
        raise ValueError("x must be >= 1")
    workers = default_workers() if workers is None else workers
    bad = _bad_primes(g)
    if order_table is None or len(order_table) < x + 1:
        order_table = prime_pass(g, max(x, 2), k_max=1, Ls=(1,), D=None, want_orders=True,
                                 workers=workers, block_size=block_size).orders
    table = order_table[: x + 1].copy()
    _fill_prime_powers(table, g, x, bad)
    tasks = [(r.lo, r.hi, bad) for r in blocks(1, x + 1, block_size)]
    parts = _run(_composite_block, tasks, workers, _set_order_table, (table,))
    return CompositeStats(
        x,
        sum(p["sum_orders"] for p in parts),
        sum(p["coprime_count"] for p in parts),
        sum(p["sum_lambda"] for p in parts),
    )


# ---------------------------------------------------------------------------
# Operation-level entry points


def prime_average(g, x: int, *, workers: int | None = None) -> tuple[int, int, Fraction]:
    """``(sum_{p <= x} ord_g(p), pi(x), average)`` with order 1 at primes dividing g."""
    if x < 2:
        raise ValueError("x must be >= 2")
    s = prime_pass(g, x, k_max=1, Ls=(1,), D=None, workers=workers)
    return s.sum_orders, s.prime_count, Fraction(s.sum_orders, s.prime_count)


def composite_average(g, x: int, *, workers: int | None = None) -> tuple[Fraction, Fraction]:
    """``(T_g(x), (1/x) sum_{n <= x} lambda(n))`` as exact fractions."""
    s = composite_pass(g, x, workers=workers)
    return s.t_average, s.lambda_average


def index_density(g, x: int, k_max: int, *, workers: int | None = None) -> dict[int, int]:
    """Counts of primes ``p <= x`` with ``k | i_g(p)`` for ``1 <= k <= k_max``."""
    return prime_pass(g, x, k_max=k_max, Ls=(1,), D=None, workers=workers).densities


def low_order_census(g, x: int, Ls, *, workers: int | None = None) -> dict[int, int]:
    """Counts of primes ``p <= x`` with ``ord_g(p) <= (p - 1)/L``."""
    return prime_pass(g, x, k_max=1, Ls=tuple(Ls), D=None, workers=workers).census


def _ek_to_mpf(v: int) -> mpmath.mpf:
    with mpmath.workdps(40):
        return mpmath.mpf(v) / (1 << EK_BITS)


def sk_ek_stats(g, x: int, D: int = DEFAULT_D, *,
                workers: int | None = None) -> dict[int, tuple[int, mpmath.mpf]]:
    """``k -> (|S_k|, E_k)`` where ``S_k = {p <= x : gcd(p - 1, D) = 2k}``.

    ``E_k`` sums ``1/p**alpha`` over ``p in S_k`` and ``p**alpha <= x``. The
    partition does not depend on ``g``; the argument only labels the report.
    """
    as_rational(g)
    if D < 2 or D % 2:
        raise ValueError(f"D must be a positive even integer, got {D}")
    s = prime_pass(g, x, k_max=1, Ls=(1,), D=D, workers=workers)
    return {k: (s.sk_counts.get(k, 0), _ek_to_mpf(s.ek_fixed.get(k, 0)))
            for k in sorted(set(s.sk_counts) | set(s.ek_fixed))}


# ---------------------------------------------------------------------------
# Reports


@dataclass
class SurveyReport:
    g: str
    x: int
    prime_count: int
    bad_primes: int
    sum_orders_primes: int
    sum_p_minus_1: int
    sum_orders_integers: int
    coprime_count: int
    sum_lambda: int
    densities: dict[int, int]
    low_order_census: dict[int, int]
    sk_counts: dict[int, int]
    ek_sums: dict[int, str]
    derived: dict
    parameters: dict
    checksum: str = ""

    def body(self) -> dict:
        d = asdict(self)
        d.pop("checksum")
        return d

    def to_json(self) -> str:
        d = _jsonable(self.body())
        d["checksum"] = self.checksum
        d["schema"] = SCHEMA
        return json.dumps(d, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SurveyReport":
        d = json.loads(text)
        if d.pop("schema", None) != SCHEMA:
            raise ValueError("not a survey report")
        for key in ("densities", "low_order_census", "sk_counts", "ek_sums"):
            d[key] = {int(k): v for k, v in d[key].items()}
        return cls(**d)


def _jsonable(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            v = _jsonable({str(kk): vv for kk, vv in v.items()})
        out[str(k)] = v
    return out


def _checksum(body: dict) -> str:
    blob = json.dumps(_jsonable(body), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def survey(g, x: int, *, k_max: int = DEFAULT_KMAX, Ls=DEFAULT_LS, D: int = DEFAULT_D,
           composite: bool = True, workers: int | None = None,
           block_size: int = DEFAULT_BLOCK) -> SurveyReport:
    """Full empirical survey of ``g`` up to ``x``.

    ``workers`` and ``block_size`` only affect scheduling; they are kept out
    of the report so that reports compare byte for byte.
    """
    g = as_rational(g)
    ps = prime_pass(g, x, k_max=k_max, Ls=Ls, D=D, want_orders=composite,
                    workers=workers, block_size=block_size)
    cs = (composite_pass(g, x, workers=workers, block_size=block_size, order_table=ps.orders)
          if composite else CompositeStats(x, 0, 0, 0))
    ek = {k: mpmath.nstr(_ek_to_mpf(v), 30) for k, v in ps.ek_fixed.items()}
    report = SurveyReport(
        g=str(g),
        x=x,
        prime_count=ps.prime_count,
        bad_primes=ps.bad_primes,
        sum_orders_primes=ps.sum_orders,
        sum_p_minus_1=ps.sum_p_minus_1,
        sum_orders_integers=cs.sum_orders,
        coprime_count=cs.coprime_count,
        sum_lambda=cs.sum_lambda,
        densities=ps.densities,
        low_order_census=ps.census,
        sk_counts=ps.sk_counts,
        ek_sums=ek,
        derived=_derived(ps, cs, D, composite),
        parameters={
            "g": str(g), "x": x, "k_max": k_max, "Ls": list(Ls), "D": D,
            "composite": composite, "version": __version__,
            "D_note": "D is a user parameter standing in for m! with m = floor(y/log^3 y), "
                      "y = log log x, which is degenerate at feasible x",
        },
    )
    report.checksum = _checksum(report.body())
    return report


def _derived(ps: PrimeStats, cs: CompositeStats, D: int, composite: bool) -> dict:
    x = ps.x
    out = {"prime_average": ps.sum_orders / ps.prime_count,
           "scaled_prime_average": 2 * ps.sum_orders / (ps.prime_count * x)}
    if composite:
        log_x = math.log(x)
        out["t_average"] = cs.sum_orders / x
        out["lambda_average"] = cs.sum_lambda / x
        out["t_scaled"] = cs.sum_orders * log_x / (x * x)
        out["lambda_scaled"] = cs.sum_lambda * log_x / (x * x)
        if x > 16:
            y = math.log(log_x)
            B = float(euler_product_B(10**4, method="accelerated").value)
            out["predicted_envelope"] = math.exp(B * y / math.log(y))
    if x > 16 and ps.ek_fixed:
        y = math.log(math.log(x))
        odd = odd_prime_product(10**4)
        out["ek_over_pk_scale"] = {
            str(k): float(_ek_to_mpf(v)) / (float(P_k_constant(k, odd_product=odd).value) * y / math.log(y))
            for k, v in ps.ek_fixed.items()
        }
    return out
