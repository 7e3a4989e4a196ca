"""Command line entry point ``fracell``.

Exit codes: 0 success, 2 validation failure (bad input or a failed
``--verify`` check), 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import experiments as ex
from .config import ConfigError, load_config
from .linsolve import SolverError
from .operators import DELTA_RULES
from .splitting import COUPLINGS

log = logging.getLogger("fracell")

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER = 0, 2, 3


def _fmt(column, v):
    if v is None:
        return ""
    if column == "wall_ms":
        return f"{v:.1f}"
    if column in ("eps", "eps_A", "eps_ref", "oracle_dev", "roundtrip"):
        return repr(float(v))
    if isinstance(v, float):
        return f"{v:g}"
    return str(v)


def rows_to_csv(rows, verify=False) -> str:
    cols = ex.CSV_COLUMNS + (ex.VERIFY_COLUMNS if verify else ())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        d = r.as_row(verify)
        writer.writerow([_fmt(c, d[c]) for c in cols])
    return buf.getvalue()


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        log.info("wrote %s", out)


def _write_rows(rows, args, extra=None):
    if args.format == "json":
        doc = {"rows": ex.rows_to_dicts(rows, args.verify)}
        if extra:
            doc.update(extra)
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(rows_to_csv(rows, args.verify), args.out)


def _check_verify(rows, args) -> int:
    if not args.verify:
        return EXIT_OK
    bad = ex.verification_failures(rows)
    for msg in bad:
        print(f"verify: {msg}", file=sys.stderr)
    return EXIT_VALIDATION if bad else EXIT_OK


def cmd_table(args) -> int:
    result = ex.reproduce_table(args.id, args.delta_rule, args.coupling, args.verify)
    print(result.format(), file=sys.stderr if args.out is None else sys.stdout)
    _write_rows(result.rows, args)
    return _check_verify(result.rows, args)


def cmd_solve(args) -> int:
    spec = load_config(args.config, allow_lists=False)
    rows = ex.run_experiment(spec, verify=args.verify)
    _write_rows(rows, args)
    return _check_verify(rows, args)


def cmd_sweep(args) -> int:
    spec = load_config(args.config, allow_lists=True)
    rows = ex.run_experiment(spec, verify=args.verify)
    orders = ex.convergence_sweep(spec, rows) if len(spec.steps) >= 3 else []
    for o in orders:
        flag = "" if o.monotone else "  (non-monotone errors)"
        print(
            f"order {o.scheme} n={o.n1}x{o.n2} alpha={o.alpha:g} theta={o.theta:g} "
            f"sigma=({o.sigma1:g},{o.sigma2:g}) component={o.component}: {o.order:.3f}{flag}",
            file=sys.stderr,
        )
    _write_rows(rows, args, {"orders": [ex.order_to_dict(o) for o in orders]})
    return _check_verify(rows, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracell", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--verify", action="store_true",
                       help="append modal-oracle and round-trip cross-checks")

    p = sub.add_parser("table", help="reproduce an error table (1..6)")
    p.add_argument("--id", type=int, required=True, choices=sorted(ex.TABLES))
    p.add_argument("--delta-rule", choices=DELTA_RULES, default=ex.TABLE_DELTA_RULE)
    p.add_argument("--coupling", choices=COUPLINGS, default=ex.TABLE_COUPLING)
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("solve", help="run a single configuration")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="run a parameter sweep and report observed orders")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
