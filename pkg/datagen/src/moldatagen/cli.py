"""datagen command line: emit moldata JSON fixtures for the benchmark molecules."""

from __future__ import annotations

import argparse
import sys

from .generate import generate, parse_grid
from .molecules import MOLECULES


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="datagen",
        description="Generate moldata/1 JSON fixtures (STO-3G RHF active-space integrals).",
    )
    parser.add_argument("--molecule", required=True, help=f"one of {sorted(MOLECULES)}")
    parser.add_argument(
        "--grid",
        default=None,
        help="start:stop:count or comma-separated bond lengths in Angstrom "
        "(default: the molecule's standard grid)",
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)
    try:
        grid = parse_grid(args.grid) if args.grid else None
        verbose = (lambda *_: None) if args.quiet else print
        manifest = generate(args.molecule, grid, args.out, verbose=verbose)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    n_ok, n_skip = len(manifest["files"]), len(manifest["skipped"])
    if not args.quiet:
        print(f"{manifest['molecule']}: {n_ok} files, {n_skip} skipped -> {args.out}")
    return 0 if n_ok else 3


if __name__ == "__main__":
    sys.exit(main())
