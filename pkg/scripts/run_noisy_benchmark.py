#!/usr/bin/env python3
"""Noisy-tier benchmarks on H2: shot noise only, then shot noise plus a
representative depolarizing+readout device profile. Emits both report
tables for side-by-side comparison with the ideal tier.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vqebench.ansatz import AnsatzSpec
from vqebench.backend import BackendSpec, NoiseProfile
from vqebench.bench import SuiteConfig, emit_report, load_run_records, rows_from_records, run_suite

ROOT = Path(__file__).resolve().parent.parent
DEVICE_PROFILE = NoiseProfile(p1=1e-3, p2=1e-2, readout=((0.02, 0.02),))
OPTIMIZERS = ("spsa", "cobyla", "powell", "gd", "nft", "adam", "nelder-mead", "cg", "lbfgs", "aqgd")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=ROOT / "results" / "noisy")
    parser.add_argument("--shots", type=int, default=8192)
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    parser.add_argument("--stride", type=int, default=6)
    parser.add_argument("--optimizers", nargs="+", default=list(OPTIMIZERS))
    args = parser.parse_args()

    for label, noise in (("shots", None), ("device", DEVICE_PROFILE)):
        config = SuiteConfig(
            data_dir=ROOT / "data",
            molecules=("h2",),
            optimizers=tuple(args.optimizers),
            seeds=tuple(args.seeds),
            backend=BackendSpec("sampled", shots=args.shots, noise=noise),
            ansatz=AnsatzSpec(),
            max_iter=100,
            grid_stride=args.stride,
            workers=2,
        )
        out = Path(args.out) / label
        run_suite(config, out)
        rows, header = rows_from_records(load_run_records(out), aggregate="optimizer")
        table = emit_report(rows, "md", header)
        (out / "report.md").write_bytes(table)
        (out / "report.csv").write_bytes(emit_report(rows, "csv", header))
        print(f"\n== {label} tier ==\n" + table.decode())
    return 0


if __name__ == "__main__":
    sys.exit(main())
