#!/usr/bin/env python3
"""Ideal-tier benchmark: every optimizer over the bundled molecules,
100-iteration cap, statevector backend. Emits per-run records and the
aggregated error table (the ideal-tier analog of the headline results).

Desk-scale defaults: H2 + LiH with all ten optimizers. --full adds the
triatomics (slower); --quick trims the grids.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vqebench.ansatz import AnsatzSpec
from vqebench.backend import BackendSpec
from vqebench.bench import SuiteConfig, emit_report, load_run_records, rows_from_records, run_suite
from vqebench.optim import OPTIMIZER_NAMES

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=ROOT / "results" / "ideal")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--quick", action="store_true", help="stride-4 grids")
    parser.add_argument("--full", action="store_true", help="include BeH2/H2O/HF")
    args = parser.parse_args()

    molecules = ["h2", "lih"] + (["beh2", "h2o", "hf"] if args.full else [])
    config = SuiteConfig(
        data_dir=ROOT / "data",
        molecules=tuple(molecules),
        optimizers=tuple(OPTIMIZER_NAMES),
        seeds=(args.seed,),
        backend=BackendSpec("statevector"),
        ansatz=AnsatzSpec(),
        max_iter=100,
        grid_stride=4 if args.quick else 1,
        workers=2,
    )
    out = Path(args.out)
    run_suite(config, out)
    rows, header = rows_from_records(load_run_records(out), aggregate="optimizer")
    table = emit_report(rows, "md", header)
    (out / "report.md").write_bytes(table)
    (out / "report.csv").write_bytes(emit_report(rows, "csv", header))
    print(table.decode())
    return 0


if __name__ == "__main__":
    sys.exit(main())
