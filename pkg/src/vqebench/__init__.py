"""vqebench: optimizer benchmarking for variational quantum eigensolvers."""

__version__ = "0.1.0"

from .ansatz import AnsatzKind, AnsatzSpec, GradientMode, build_ansatz_circuit, uccsd_excitations
from .backend import BackendSpec, Circuit, NoiseProfile, expectation_exact, expectation_sampled, run_statevector
from .bench import ScanConfig, compute_metrics, emit_report, iterations_to_tolerance, scan_curve
from .fermion import FermionOperator, Mapping, hf_reference, jordan_wigner, parity_map_reduced
from .moldata import GeometrySeries, MolecularData, build_dipole, build_hamiltonian, parse_moldata
from .optim import OPTIMIZER_NAMES, OptimizerResult, minimize
from .pauli import PauliString, QubitOperator, op_sum, op_to_matrix, pauli_product
from .vqe import VqeProblem, VqeResult, exact_ground_state, vqe_minimize

__all__ = [
    "AnsatzKind", "AnsatzSpec", "BackendSpec", "Circuit", "FermionOperator",
    "GeometrySeries", "GradientMode", "Mapping", "MolecularData", "NoiseProfile",
    "OPTIMIZER_NAMES", "OptimizerResult", "PauliString", "QubitOperator",
    "ScanConfig", "VqeProblem", "VqeResult", "build_ansatz_circuit",
    "build_dipole", "build_hamiltonian", "compute_metrics", "emit_report",
    "exact_ground_state", "expectation_exact", "expectation_sampled",
    "hf_reference", "iterations_to_tolerance", "jordan_wigner", "minimize",
    "op_sum", "op_to_matrix", "parity_map_reduced", "parse_moldata",
    "pauli_product", "run_statevector", "scan_curve", "uccsd_excitations",
    "vqe_minimize",
]
