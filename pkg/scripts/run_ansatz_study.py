#!/usr/bin/env python3
"""Analytic-gradient-descent ansatz study: the naive two-term shift rule on
UCCSD versus the single-qubit-rotation TwoLocal circuit (H and RY blocks,
CZ entanglers, full entanglement, two repetitions), iteration cap 1000.
Prints ground-state and dissociation-energy errors for H2 and LiH.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vqebench.ansatz import AnsatzKind, AnsatzSpec
from vqebench.backend import BackendSpec
from vqebench.bench import ScanConfig, compute_metrics, scan_curve
from vqebench.moldata import GeometrySeries

ROOT = Path(__file__).resolve().parent.parent
TWO_LOCAL = AnsatzSpec(
    AnsatzKind.TWO_LOCAL, rotation_blocks=("h", "ry"),
    entangler="cz", entanglement="full", repetitions=2,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--molecules", nargs="+", default=["h2", "lih"])
    parser.add_argument("--stride", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'molecule':<8} {'ansatz':<10} {'delta_gs':>12} {'delta_de':>12}")
    for molecule in args.molecules:
        series = GeometrySeries.load(ROOT / "data" / molecule).subsample(args.stride)
        for label, ansatz in (("ucc", AnsatzSpec()), ("twolocal", TWO_LOCAL)):
            scan = scan_curve(
                series, ansatz, "aqgd", BackendSpec(),
                ScanConfig(seed=args.seed, max_iter=1000, dipole="off", workers=2),
            )
            m = compute_metrics(scan)
            print(f"{molecule:<8} {label:<10} {m.delta_gs:>12.3e} {m.delta_de:>12.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
