"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from . import __version__
from .errors import ConvergenceError, DomainError
from .integrals import KINDS, IntegralSpec, StoParams, compute
from .legendre import legendre_eval, legendre_oracle
from .product_expansion import (
    EllipsoidalPoint,
    ProductExpansionTable,
    build_expansion,
    eval_direct,
    eval_expansion,
)

_KIND_FLAGS = {"overlap": KINDS[0], "na-a": KINDS[1], "na-b": KINDS[2]}


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any binary64 value."""
    return format(x, ".17g")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _int_or_real(text: str) -> float | int:
    v = float(text)
    return int(v) if v.is_integer() else v


def cmd_legendre(args) -> int:
    closed = recurrence = None
    if args.method in ("closed", "both"):
        closed = legendre_eval(args.l, args.m, args.x)
    if args.method in ("recurrence", "both"):
        recurrence = legendre_oracle(args.l, args.m, args.x)
    if args.method == "both":
        print(f"closed={fmt(closed)}")
        print(f"recurrence={fmt(recurrence)}")
        print(f"difference={fmt(closed - recurrence)}")
    else:
        print(fmt(closed if closed is not None else recurrence))
    return 0


def write_table_csv(table: ProductExpansionTable, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "kp", "u", "s", "rat_num", "rat_den", "radicand_num", "radicand_den",
                "coeff_float", "pow_plus", "pow_minus"])
    for t, c in zip(table.terms, table.float_coeffs):
        w.writerow([t.k, t.kp, t.u, t.s, t.coeff.rat.numerator, t.coeff.rat.denominator,
                    t.coeff.radicand.numerator, t.coeff.radicand.denominator, fmt(c),
                    t.pow_plus, t.pow_minus])


def table_json(table: ProductExpansionTable) -> dict:
    return {
        "l": table.l,
        "lambda": table.lam,
        "lp": table.lp,
        "terms": [
            {
                "k": t.k, "kp": t.kp, "u": t.u, "s": t.s,
                "rat": [t.coeff.rat.numerator, t.coeff.rat.denominator],
                "radicand": [t.coeff.radicand.numerator, t.coeff.radicand.denominator],
                "coeff_float": c,
                "pow_plus": t.pow_plus, "pow_minus": t.pow_minus,
            }
            for t, c in zip(table.terms, table.float_coeffs)
        ],
    }


def cmd_product_table(args) -> int:
    table = build_expansion(args.l, args.lam, args.lp)
    if args.format == "csv":
        write_table_csv(table, sys.stdout)
    else:
        json.dump(table_json(table), sys.stdout, indent=1)
        sys.stdout.write("\n")
    return 0


def cmd_product_eval(args) -> int:
    pt = EllipsoidalPoint(args.mu, args.nu)
    table = build_expansion(args.l, args.lam, args.lp)
    expansion = eval_expansion(table, pt)
    direct = eval_direct(args.l, args.lam, args.lp, pt)
    print(f"expansion={fmt(expansion)}")
    print(f"direct={fmt(direct)}")
    print(f"difference={fmt(expansion - direct)}")
    return 0


def _print_result(res) -> None:
    print(f"method={res.method} value={fmt(res.value)} est_error={fmt(res.est_error)}")


def cmd_integral(args) -> int:
    from .oracle import quad_integral

    lam = args.lam
    spec = IntegralSpec(
        StoParams(args.na, args.la, lam, args.za),
        StoParams(args.nb, args.lb, lam, args.zb),
        args.R,
        _KIND_FLAGS[args.kind],
    )
    integer_path = spec.a.integer_n and spec.b.integer_n
    if not integer_path and not args.oracle:
        raise DomainError("noninteger n is only available on the quadrature path; add --oracle")
    analytic = compute(spec) if integer_path else None
    if analytic is not None:
        _print_result(analytic)
    if args.oracle:
        quad = quad_integral(spec)
        _print_result(quad)
        if analytic is not None:
            denom = abs(quad.value) or 1.0
            print(f"rel_diff={fmt(abs(analytic.value - quad.value) / denom)}")
    return 0


def cmd_validate(args) -> int:
    from .validation import run_validation

    if args.lmax > 12 and not args.force:
        raise DomainError("--lmax above 12 needs --force")
    report = run_validation(args.lmax, args.samples, args.tol, args.seed,
                            digits_lmax=args.digits_lmax, integrals=not args.skip_integrals)
    json.dump(report.to_dict(), sys.stdout, indent=1)
    sys.stdout.write("\n")
    return 0 if report.ok else 1


def cmd_bench(args) -> int:
    from .integrals import kernel_matrix
    from .oracle import quad_batch  # noqa: F401  (import cost kept out of timings)
    from .validation import sweep_specs

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["l", "lp", "lambda", "terms", "build_us", "eval_ns"])
    pt = EllipsoidalPoint(2.5, 0.3)
    for l in range(args.lmax + 1):
        for lp in range(args.lmax + 1):
            for lam in range(min(l, lp) + 1):
                t0 = time.perf_counter()
                table = build_expansion.__wrapped__(l, lam, lp)
                table.integer_groups
                build = time.perf_counter() - t0
                reps = max(1, 2000 // max(1, len(table)))
                t0 = time.perf_counter()
                for _ in range(reps):
                    eval_expansion(table, pt)
                per_eval = (time.perf_counter() - t0) / reps
                w.writerow([l, lp, lam, len(table), f"{build * 1e6:.1f}", f"{per_eval * 1e9:.0f}"])
    specs = sweep_specs(4, 3)[: args.sweep]
    kernel_matrix.cache_clear()
    t0 = time.perf_counter()
    for s in specs:
        compute(s)
    total = time.perf_counter() - t0
    print(f"# integral sweep: {len(specs)} integrals, {total * 1e3:.3f} ms total", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twocenter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("legendre", help="evaluate a normalized associated Legendre function")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--method", choices=("closed", "recurrence", "both"), default="closed")
    p.set_defaults(func=cmd_legendre)

    p = sub.add_parser("product-table", help="dump the product expansion coefficients")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--lp", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_product_table)

    p = sub.add_parser("product-eval", help="evaluate the product expansion at one point")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--lp", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.set_defaults(func=cmd_product_eval)

    p = sub.add_parser("integral", help="two-center overlap or nuclear attraction integral")
    p.add_argument("--kind", choices=tuple(_KIND_FLAGS), default="overlap")
    p.add_argument("--na", type=_int_or_real, required=True)
    p.add_argument("--la", type=int, default=0)
    p.add_argument("--za", type=float, required=True)
    p.add_argument("--nb", type=_int_or_real, required=True)
    p.add_argument("--lb", type=int, default=0)
    p.add_argument("--zb", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=int, default=0)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--oracle", action="store_true", help="also run the quadrature reference")
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("validate", help="run the property suites and print a JSON report")
    p.add_argument("--lmax", type=int, default=8)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--digits-lmax", type=int, default=15)
    p.add_argument("--skip-integrals", action="store_true")
    p.add_argument("--force", action="store_true", help="allow --lmax above 12")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="timing table for expansion build and evaluation")
    p.add_argument("--lmax", type=int, default=8)
    p.add_argument("--sweep", type=int, default=100, help="number of integrals in the timed sweep")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
