"""Command line: ``algebroid-verify check FILE`` and friends."""
from __future__ import annotations

import argparse
import os
import sys

from .catalog import catalog_names, catalog_text, load_catalog
from .checks import STAGE_ORDER, emit_report, run_checks
from .courant import HATDUAL_READINGS
from .document import DocumentError, load_document
from .expr import ExpressionError, parse_expr
from .oracle import DEFAULT_SEED


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="algebroid-verify", description="Exact verification of Lie bialgebroid, Courant and Dirac identities.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the checkers on a structure file or catalog entry")
    c.add_argument("target", help="path to a structure file, or the name of a catalog entry")
    c.add_argument("--only", help=f"comma-separated stages ({','.join(STAGE_ORDER)})")
    c.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"sample-point seed (default {DEFAULT_SEED})")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--probes", help="comma-separated probe functions, e.g. x1,x1*x2")
    c.add_argument("--hatdual", choices=HATDUAL_READINGS, default="symmetric",
                   help="reading of the rescaled dual differential in the extended bracket")
    c.add_argument("--timing", action="store_true", help="include per-check timing")

    sub.add_parser("catalog", help="list the shipped example structures")
    s = sub.add_parser("show", help="print a catalog entry")
    s.add_argument("name")
    return p


def _load(target: str):
    if os.path.exists(target):
        return load_document(target)
    if target in catalog_names():
        return load_catalog(target)
    raise FileNotFoundError(f"{target}: no such file or catalog entry")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog":
        for name in catalog_names():
            print(name)
        return 0
    if args.command == "show":
        try:
            sys.stdout.write(catalog_text(args.name))
        except KeyError as e:
            print(f"error: {e.args[0]}", file=sys.stderr)
            return 2
        return 0

    try:
        doc = _load(args.target)
        probes = None
        if args.probes:
            probes = [parse_expr(p.strip(), n_vars=doc.dim) for p in args.probes.split(",") if p.strip()]
            if any(not p.is_time_free() for p in probes):
                raise ValueError("probe functions live on the base and may not involve t")
        selection = [s.strip() for s in args.only.split(",") if s.strip()] if args.only else None
        report = run_checks(doc, selection=selection, seed=args.seed, probes=probes, hatdual=args.hatdual)
    except (DocumentError, ExpressionError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(report, args.format, timing=args.timing))
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
