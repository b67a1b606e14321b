"""Command-line front end.

JSON is the canonical output; ``--format csv`` is available for the tabular
subcommands. Exit status is 0 on success, 1 on domain errors (for example
``g = 1``) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import __version__
from .arith import as_rational, multiplicative_basics, order_mod
from .constants import (
    B_DEFAULT_CUTOFF,
    C_DEFAULT_CUTOFF,
    CG_DEFAULT_CUTOFF,
    cg_closed_form,
    cg_series,
    default_workers,
    euler_product_B,
    euler_product_c,
)
from .kummer import decompose, kummer_degree
from .survey import (
    DEFAULT_D,
    DEFAULT_KMAX,
    DEFAULT_LS,
    composite_pass,
    prime_pass,
    sk_ek_stats,
    survey,
)

TABULAR = {"density", "census", "sk-ek"}


def _num(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 30, min_fixed=-100, max_fixed=100)


def _bound(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 6)


def _constant_json(direct, accelerated) -> dict:
    return {
        "value": accelerated.certified_digits(),
        "tail_bound": _bound(accelerated.tail_bound),
        "cutoff": accelerated.cutoff,
        "method": accelerated.method,
        "direct": {
            "value": direct.certified_digits(),
            "raw": _num(direct.value),
            "tail_bound": _bound(direct.tail_bound),
        },
        "routes_agree": direct.contains(accelerated.value),
    }


def cmd_constants(args) -> dict:
    out = {}
    if args.only in (None, "B"):
        out["B"] = _constant_json(
            euler_product_B(args.b_cutoff, "direct", args.workers),
            euler_product_B(args.b_cutoff, "accelerated", args.workers))
    if args.only in (None, "c"):
        out["c"] = _constant_json(
            euler_product_c(args.c_cutoff, "direct", args.workers),
            euler_product_c(args.c_cutoff, "accelerated", args.workers))
    return out


def cmd_cg(args) -> dict:
    dec = decompose(args.g)
    closed = cg_closed_form(dec, args.c_cutoff, args.workers)
    lo, hi = closed.value - closed.tail_bound, closed.value + closed.tail_bound
    out = {
        "multiplier": str(closed.rational_multiplier),
        "value": _num(closed.value),
        "tail_bound": _bound(closed.tail_bound),
        "certified": _certified(lo, hi),
    }
    if args.series:
        s = cg_series(dec, args.series)
        out["series"] = {
            "K": args.series,
            "value": _num(s.value),
            "tail_bound": _bound(s.tail_bound),
            "difference": _bound(abs(s.value - closed.value)),
            "consistent": bool(abs(s.value - closed.value) <= s.tail_bound + closed.tail_bound),
        }
    return out


def _certified(lo, hi) -> str:
    from .constants import certified_digits

    return certified_digits(lo, hi) if lo >= 0 else ""


def cmd_decompose(args) -> dict:
    d = decompose(args.g)
    return {"h": d.h, "e": d.e, "g0": str(d.g0), "g1": d.g1, "g2": str(d.g2),
            "delta": d.delta, "n_g": d.n_g, "negative": d.negative}


def cmd_degree(args) -> dict:
    dec = decompose(args.g)
    rows = []
    for k in args.k:
        kd = kummer_degree(dec, k)
        rows.append({"k": k, "degree": kd.degree, "epsilon": str(kd.epsilon)})
    return {"degrees": rows}


def cmd_order(args) -> dict:
    o = order_mod(args.g, args.n)
    b = multiplicative_basics(args.n)
    return {"order": o, "carmichael_lambda": b.carmichael, "phi": b.phi}


def cmd_prime_avg(args) -> dict:
    s = prime_pass(args.g, args.x, k_max=1, Ls=(1,), D=None, workers=args.workers)
    avg = Fraction(s.sum_orders, s.prime_count)
    return {"sum_orders": s.sum_orders, "prime_count": s.prime_count,
            "bad_primes": s.bad_primes, "average": str(avg), "average_float": float(avg),
            "scaled_average": float(2 * avg / args.x)}


def cmd_t_avg(args) -> dict:
    c = composite_pass(args.g, args.x, workers=args.workers)
    return {"sum_orders": c.sum_orders, "coprime_count": c.coprime_count,
            "sum_lambda": c.sum_lambda, "t_average": str(c.t_average),
            "t_average_float": float(c.t_average),
            "lambda_average": str(c.lambda_average),
            "lambda_average_float": float(c.lambda_average)}


def cmd_density(args) -> dict:
    dec = decompose(args.g)
    s = prime_pass(args.g, args.x, k_max=args.k_max, Ls=(1,), D=None, workers=args.workers)
    rows = []
    for k, count in s.densities.items():
        rows.append({"k": k, "count": count, "fraction": count / s.prime_count,
                     "predicted": 1 / kummer_degree(dec, k).degree})
    return {"prime_count": s.prime_count, "rows": rows}


def cmd_census(args) -> dict:
    s = prime_pass(args.g, args.x, k_max=1, Ls=tuple(args.L), D=None, workers=args.workers)
    return {"prime_count": s.prime_count,
            "rows": [{"L": L, "count": c} for L, c in s.census.items()]}


def cmd_sk_ek(args) -> dict:
    stats = sk_ek_stats(args.g, args.x, args.D, workers=args.workers)
    return {"rows": [{"k": k, "count": c, "E_k": _num(e)} for k, (c, e) in stats.items()],
            "D_note": "D stands in for m! of the asymptotic argument"}


def cmd_survey(args) -> dict:
    r = survey(args.g, args.x, k_max=args.k_max, Ls=tuple(args.L), D=args.D,
               workers=args.workers)
    return json.loads(r.to_json())


COMMANDS = {
    "constants": cmd_constants,
    "cg": cmd_cg,
    "decompose": cmd_decompose,
    "degree": cmd_degree,
    "order": cmd_order,
    "prime-avg": cmd_prime_avg,
    "t-avg": cmd_t_avg,
    "density": cmd_density,
    "census": cmd_census,
    "sk-ek": cmd_sk_ek,
    "survey": cmd_survey,
}


def _positive(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--workers", type=_positive, default=None,
                        help="worker processes (default: $AVGORDER_WORKERS or 1)")

    parser = argparse.ArgumentParser(prog="avgorder", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", parents=[common], help="B and c with tail bounds")
    p.add_argument("--b-cutoff", type=_positive, default=B_DEFAULT_CUTOFF)
    p.add_argument("--c-cutoff", type=_positive, default=C_DEFAULT_CUTOFF)
    p.add_argument("--only", choices=("B", "c"))

    p = sub.add_parser("cg", parents=[common], help="c_g as a rational multiple of c")
    p.add_argument("--g", required=True)
    p.add_argument("--c-cutoff", type=_positive, default=CG_DEFAULT_CUTOFF)
    p.add_argument("--series", type=_positive, metavar="K", help="cross-check with K series terms")

    p = sub.add_parser("decompose", parents=[common], help="h, e, g1, Delta, n for g")
    p.add_argument("--g", required=True)

    p = sub.add_parser("degree", parents=[common], help="Kummer degrees D_g(k)")
    p.add_argument("--g", required=True)
    p.add_argument("--k", type=_positive, nargs="+", required=True)

    p = sub.add_parser("order", parents=[common], help="multiplicative order of g mod n")
    p.add_argument("--g", required=True)
    p.add_argument("--n", type=_positive, required=True)

    for name, helptext in (("prime-avg", "average of ord_g(p) over p <= x"),
                           ("t-avg", "T_g(x) and the lambda average")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--g", required=True)
        p.add_argument("--x", type=_positive, required=True)

    p = sub.add_parser("density", parents=[common], help="counts of p <= x with k | i_g(p)")
    p.add_argument("--g", required=True)
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--k-max", type=_positive, default=DEFAULT_KMAX)

    p = sub.add_parser("census", parents=[common], help="counts of p with ord_g(p) <= (p-1)/L")
    p.add_argument("--g", required=True)
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--L", type=_positive, nargs="+", default=list(DEFAULT_LS))

    p = sub.add_parser("sk-ek", parents=[common], help="S_k partition and E_k sums")
    p.add_argument("--g", required=True)
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--D", type=_positive, default=DEFAULT_D)

    p = sub.add_parser("survey", parents=[common], help="full survey report")
    p.add_argument("--g", required=True)
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--k-max", type=_positive, default=DEFAULT_KMAX)
    p.add_argument("--L", type=_positive, nargs="+", default=list(DEFAULT_LS))
    p.add_argument("--D", type=_positive, default=DEFAULT_D)
    return parser


def _parameters(args) -> dict:
    skip = {"command", "format", "out", "workers"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def render(args, result: dict) -> str:
    if args.format == "csv":
        rows = result["rows"]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    if args.command == "survey":
        return json.dumps(result, sort_keys=True, indent=2) + "\n"
    doc = {"schema": f"avgorder.{args.command}/1", "version": __version__,
           "parameters": _parameters(args), "result": result}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "csv" and args.command not in TABULAR:
        parser.error(f"--format csv is only available for {', '.join(sorted(TABULAR))}")
    if args.workers is None:
        args.workers = default_workers()
    try:
        if hasattr(args, "g"):
            args.g = str(as_rational(args.g))
        if args.command == "sk-ek" and args.D % 2:
            raise ValueError(f"D must be even, got {args.D}")
        result = COMMANDS[args.command](args)
    except (ValueError, ArithmeticError) as exc:
        print(f"avgorder: error: {exc}", file=sys.stderr)
        return 1
    text = render(args, result)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
