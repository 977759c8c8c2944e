"""VQE driver: ties Hamiltonian, ansatz, backend, and optimizer together,
plus the dense exact-diagonalization reference."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzKind, AnsatzSpec, GradientMode, build_ansatz_circuit, shift_rule_gradient
from .backend import BackendSpec, Circuit, EnergyEvaluator
from .errors import DimensionError, DomainError, ResourceLimitError
from .fermion import Mapping
from .optim import OptimizerResult, minimize
from .pauli import QubitOperator
from .seeding import derive_seed


@dataclass(frozen=True)
class VqeProblem:
    """One minimization task: operator, trial-state family, backend tier."""

    hamiltonian: QubitOperator
    ansatz: AnsatzSpec
    n_spin_orbitals: int
    n_electrons: int
    mapping: Mapping
    backend: BackendSpec = field(default_factory=BackendSpec)
    seed: int = 0

    def build_circuit(self) -> Circuit:
        circuit = build_ansatz_circuit(
            self.ansatz, self.n_spin_orbitals, self.n_electrons, self.mapping
        )
        if circuit.n_qubits != self.hamiltonian.n_qubits:
            raise DimensionError("ansatz register does not match the Hamiltonian")
        return circuit


@dataclass
class VqeResult:
    energy: float
    params: np.ndarray
    optimizer: OptimizerResult
    metadata: dict


class CircuitCost:
    """Energy cost function bound to a circuit and backend.

    Sampled backends draw fresh shots per call from one seeded stream, so a
    whole optimization run is reproducible from the problem seed while
    repeated evaluations at the same point fluctuate like real shots.
    Exposes `shift_gradient` so AQGD can apply parameter-shift rules, and
    `n_evaluations` counting every energy value produced (shift evaluations
    included).
    """

    def __init__(self, circuit: Circuit, op: QubitOperator, backend: BackendSpec,
                 seed: int | None = 0):
        self.evaluator = EnergyEvaluator(circuit, op, backend, rng=seed)
        self.circuit = circuit
        self.n_evaluations = 0

    def __call__(self, params) -> float:
        self.n_evaluations += 1
        return self.evaluator.energy(params)

    def shift_gradient(self, params, mode: str | GradientMode, on_eval=None):
        mode = GradientMode(mode) if isinstance(mode, str) else mode

        def tick(value):
            self.n_evaluations += 1
            if on_eval is not None:
                on_eval(value)

        return shift_rule_gradient(
            self.circuit, params, self.evaluator.op, self.evaluator,
            mode, on_eval=tick,
        )

    def statevector(self, params) -> np.ndarray:
        return self.evaluator.statevector(params)


def vqe_minimize(problem: VqeProblem, optimizer: str = "cg",
                 max_iter: int | None = 100,
                 options: dict | None = None) -> VqeResult:
    """Run one VQE minimization from all-zero initial parameters.

    Returns the best-seen energy and parameters; a NaN-aborted run carries
    status/diagnostics in result.optimizer.
    """
    circuit = problem.build_circuit()
    cost = CircuitCost(circuit, problem.hamiltonian, problem.backend, problem.seed)
    if problem.ansatz.kind is AnsatzKind.TWO_LOCAL and circuit.n_params:
        # the all-zero TwoLocal start sits in a known trap; seed-random like
        # the reference toolchain (UCCSD keeps the Hartree-Fock zero start)
        init_rng = np.random.default_rng(derive_seed("twolocal-init", problem.seed))
        x0 = init_rng.uniform(-np.pi, np.pi, circuit.n_params)
    else:
        x0 = np.zeros(circuit.n_params)
    if circuit.n_params == 0:
        energy = cost(x0)
        opt = OptimizerResult(
            best_params=x0, best_value=energy, n_iterations=0, n_evaluations=1,
            trajectory=[(0, energy)], eval_counts=[1],
            status="ok", message="zero-parameter ansatz",
        )
    else:
        opt = minimize(
            optimizer, cost, x0, max_iter=max_iter, seed=problem.seed,
            options=options,
        )
    metadata = {
        "optimizer": optimizer,
        "max_iter": max_iter,
        "seed": problem.seed,
        "mapping": problem.mapping.value,
        **problem.backend.describe(),
        **problem.ansatz.describe(),
    }
    return VqeResult(
        energy=opt.best_value,
        params=np.asarray(opt.best_params, dtype=float),
        optimizer=opt,
        metadata=metadata,
    )


def exact_ground_state(op: QubitOperator,
                       particle_filter: tuple[int, Mapping] | None = None):
    """Dense diagonalization ('Numpy eigensolver' reference).

    With a particle filter (N, Mapping.JW) the search is restricted to the
    N-electron occupation sector; reduced/parity operators are diagonalized
    as-is since their register already encodes the symmetry sector.
    """
    if op.n_qubits > 14:
        raise ResourceLimitError("exact diagonalization limited to 14 qubits")
    if not op.is_hermitian():
        raise DomainError("exact_ground_state needs a Hermitian operator")
    matrix = op.to_matrix()
    dim = matrix.shape[0]
    if particle_filter is None:
        values, vectors = np.linalg.eigh(matrix)
        return float(values[0]), vectors[:, 0]
    n_particles, mapping = particle_filter
    if mapping is not Mapping.JW:
        raise DomainError("particle filter is defined for Jordan-Wigner registers")
    sector = [b for b in range(dim) if b.bit_count() == n_particles]
    if not sector:
        raise DomainError(f"no basis states with {n_particles} particles")
    sub = matrix[np.ix_(sector, sector)]
    values, vectors = np.linalg.eigh(sub)
    full = np.zeros(dim, dtype=complex)
    full[sector] = vectors[:, 0]
    return float(values[0]), full
