#!/usr/bin/env python3
"""Convergence-speed study: iterations and cost evaluations each optimizer
needs to bring the H2 (and optionally LiH) ground-state energy within a
relative tolerance of the exact value, iteration cap lifted to 10^4.
Both counts are printed because one "iteration" means different things to
different optimizers; evaluations are the fair common currency.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vqebench.ansatz import AnsatzSpec
from vqebench.backend import BackendSpec
from vqebench.bench import iterations_to_tolerance
from vqebench.fermion import Mapping
from vqebench.moldata import GeometrySeries, build_hamiltonian
from vqebench.optim import OPTIMIZER_NAMES
from vqebench.vqe import VqeProblem

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tol", type=float, default=1e-6)
    parser.add_argument("--molecules", nargs="+", default=["h2"])
    parser.add_argument("--optimizers", nargs="+", default=list(OPTIMIZER_NAMES))
    parser.add_argument("--radius", type=float, default=0.7, help="bond length to study (A)")
    args = parser.parse_args()

    for molecule in args.molecules:
        series = GeometrySeries.load(ROOT / "data" / molecule)
        entry = min(series, key=lambda e: abs(e.geometry_param - args.radius))
        ham = build_hamiltonian(entry, Mapping.PARITY_REDUCED)
        print(f"\n{entry.name} at r = {entry.geometry_param:.2f} A, tolerance {args.tol:g}:")
        print(f"{'optimizer':<12} {'iterations':>10} {'evaluations':>12} {'reached':>8}")
        for optimizer in args.optimizers:
            problem = VqeProblem(
                hamiltonian=ham, ansatz=AnsatzSpec(),
                n_spin_orbitals=2 * entry.n_spatial, n_electrons=entry.n_electrons,
                mapping=Mapping.PARITY_REDUCED, backend=BackendSpec(), seed=0,
            )
            iters, evals, reached = iterations_to_tolerance(problem, optimizer, tol=args.tol)
            print(f"{optimizer:<12} {iters:>10} {evals:>12} {str(reached):>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
