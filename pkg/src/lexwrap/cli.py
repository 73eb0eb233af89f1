"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 theorem violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .complex import check_field
from .pipeline import (
    FORMATS,
    DelaunayFiltration,
    TheoremViolation,
    barcode_records,
    export,
    load_points,
    reconstruct,
    verify_theorems,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_THEOREM = 0, 1, 2, 3
OUT_ENV = "LEXWRAP_OUT_DIR"
DEFAULT_OUT = "lexwrap-out"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _field(text: str) -> int:
    try:
        return check_field(int(text))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _grid(text: str):
    if text == "auto":
        return "auto"
    try:
        values = [v.strip() for v in text.split(",") if v.strip()]
        for v in values:
            float(v)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'auto' or a comma-separated list of radii") from None
    if not values:
        raise argparse.ArgumentTypeError("empty radius list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lexwrap", description="Wrap-complex reconstruction with lexicographically minimal cycles.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("input", help="point file (xyz, csv or off)")
        p.add_argument("--format", choices=FORMATS, help="input format (default: file extension)")
        p.add_argument("--field", type=_field, default=2, metavar="p", help="prime field characteristic (default 2)")
        p.add_argument("--perturb", action="store_true", help="apply the deterministic general-position perturbation")
        p.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or ./{DEFAULT_OUT})")

    rec = sub.add_parser("reconstruct", help="cycle of the most persistent feature, with mesh exports")
    common(rec)
    rec.add_argument("--dim", type=int, default=1, metavar="k", help="homology dimension (default 1)")

    ver = sub.add_parser("verify", help="check the Wrap-complex support theorems")
    common(ver)
    ver.add_argument("--r-grid", type=_grid, default="auto", help="'auto' (critical radii) or comma-separated radii")
    ver.add_argument("--jobs", type=int, default=1, help="parallel workers across radii")

    bar = sub.add_parser("barcode", help="write the persistence barcode")
    common(bar)
    return parser


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)


def _write(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def run(args) -> int:
    X = load_points(args.input, args.format, perturb=args.perturb)
    out = _out_dir(args)
    if args.command == "reconstruct":
        if not 1 <= args.dim <= X.dim:
            raise UsageError(f"--dim must be between 1 and {X.dim} for {X.dim}-dimensional points")
        report = reconstruct(X, args.dim, args.field)
        export(report, out)
        print(
            f"dim {report.dim} interval [{report.birth:.6g}, {report.death:.6g}) ratio {report.ratio:.6g}: "
            f"{len(report.cycle)} simplices, containment {report.containment}, watertight {report.watertight}"
        )
        return EXIT_OK
    bundle = DelaunayFiltration.build(X, args.field)
    if args.command == "barcode":
        _write(out / "barcode.json", barcode_records(bundle.barcode()))
        print(f"{len(bundle.filtration)} simplices, barcode written to {out / 'barcode.json'}")
        return EXIT_OK
    report = verify_theorems(bundle, args.r_grid, args.field, n_jobs=args.jobs)
    _write(out / "verify.json", report.to_dict())
    for name in ("lex_min_in_wrap", "death_column_in_wrap", "reduction_column_descending"):
        c = getattr(report, name)
        print(f"{name}: {c.passed} passed, {c.failed} failed")
    if not report.ok:
        for f in report.failures:
            print(json.dumps(f, sort_keys=True), file=sys.stderr)
        return EXIT_THEOREM
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # usage errors and --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return run(args)
    except UsageError as e:
        print(f"lexwrap: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TheoremViolation as e:
        print(f"lexwrap: theorem violation: {e}", file=sys.stderr)
        return EXIT_THEOREM
    except (ValueError, OSError) as e:
        print(f"lexwrap: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
