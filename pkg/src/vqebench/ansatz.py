"""Parameterized circuits (UCCSD, TwoLocal) and parameter-shift gradients.

UCCSD: for each spin-conserving excitation the anti-Hermitian generator
T - T^dag is mapped to i * sum_a c_a P_a with real c_a; the circuit emits
one PauliRotation per string (exact within an excitation since the strings
commute; a single first-order Trotter step across excitations, ordered
singles-then-doubles, lexicographic).

Gradient modes:
  * EXACT_SUBGATE shifts every sub-gate sharing a parameter slot
    individually (r = 1/2, s = pi/2 on that gate's own angle) and sums with
    the chain-rule prefactors -- exact for any two-eigenvalue gates.
  * NAIVE_TWOTERM shifts the shared parameter itself once by +-pi/2, the
    misapplication that breaks down when one parameter drives several
    sub-gates with non-unit prefactors.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .backend import (
    BackendSpec,
    Circuit,
    EnergyEvaluator,
    ROTATION_KINDS,
)
from .errors import DimensionError, DomainError, UnsupportedGateError
from .fermion import FermionOperator, Mapping, hf_reference, map_operator
from .pauli import QubitOperator


@dataclass(frozen=True)
class ExcitationList:
    """Spin-conserving singles (i, k) and doubles (i<j, k<l), one slot each."""

    n_spin_orbitals: int
    singles: tuple[tuple[int, int], ...]
    doubles: tuple[tuple[int, int, int, int], ...]

    @property
    def n_parameters(self) -> int:
        return len(self.singles) + len(self.doubles)


def uccsd_excitations(n_spin_orbitals: int, n_electrons: int) -> ExcitationList:
    """All spin-conserving singles and doubles out of the Hartree-Fock state."""
    if n_electrons >= n_spin_orbitals:
        if n_electrons > n_spin_orbitals:
            raise DomainError("more electrons than spin orbitals")
        warnings.warn("degenerate active space: no virtual orbitals, empty ansatz")
        return ExcitationList(n_spin_orbitals, (), ())
    half = n_spin_orbitals // 2
    n_alpha = (n_electrons + 1) // 2
    n_beta = n_electrons - n_alpha
    occupied = list(range(n_alpha)) + [half + p for p in range(n_beta)]
    virtual = [p for p in range(n_spin_orbitals) if p not in occupied]
    if not virtual:
        warnings.warn("degenerate active space: no virtual orbitals, empty ansatz")
        return ExcitationList(n_spin_orbitals, (), ())

    def spin(p):
        return 0 if p < half else 1

    singles = tuple(
        (i, k) for i in occupied for k in virtual if spin(i) == spin(k)
    )
    doubles = []
    for a, i in enumerate(occupied):
        for j in occupied[a + 1:]:
            for b, k in enumerate(virtual):
                for l in virtual[b + 1:]:
                    if sorted((spin(i), spin(j))) == sorted((spin(k), spin(l))):
                        doubles.append((i, j, k, l))
    return ExcitationList(n_spin_orbitals, singles, tuple(doubles))


class AnsatzKind(enum.Enum):
    UCCSD = "uccsd"
    TWO_LOCAL = "twolocal"


@dataclass(frozen=True)
class AnsatzSpec:
    """Which trial-state family to build, with TwoLocal layout knobs."""

    kind: AnsatzKind = AnsatzKind.UCCSD
    rotation_blocks: tuple[str, ...] = ("h", "ry")
    entangler: str = "cz"  # "cz" | "cnot"
    entanglement: str = "full"  # "linear" | "full"
    repetitions: int = 2

    def __post_init__(self):
        if self.kind is AnsatzKind.TWO_LOCAL:
            if self.repetitions < 1:
                raise DomainError("TwoLocal needs repetitions >= 1")
            if self.entangler not in ("cz", "cnot"):
                raise DomainError(f"unknown entangler {self.entangler!r}")
            if self.entanglement not in ("linear", "full"):
                raise DomainError(f"unknown entanglement {self.entanglement!r}")
            if any(b not in ("h", "ry") for b in self.rotation_blocks):
                raise DomainError("rotation blocks are drawn from {h, ry}")

    def describe(self) -> dict:
        if self.kind is AnsatzKind.UCCSD:
            return {"ansatz": "uccsd"}
        return {
            "ansatz": "twolocal",
            "rotation_blocks": list(self.rotation_blocks),
            "entangler": self.entangler,
            "entanglement": self.entanglement,
            "repetitions": self.repetitions,
        }


def excitation_generator(exc, n_spin_orbitals: int) -> FermionOperator:
    """Anti-Hermitian T - T^dag for one excitation tuple."""
    if len(exc) == 2:
        i, k = exc
        return FermionOperator(
            n_spin_orbitals,
            [(1.0, ((k, True), (i, False))), (-1.0, ((i, True), (k, False)))],
        )
    i, j, k, l = exc
    return FermionOperator(
        n_spin_orbitals,
        [
            (1.0, ((k, True), (l, True), (i, False), (j, False))),
            (-1.0, ((j, True), (i, True), (l, False), (k, False))),
        ],
    )


def mapped_generator(exc, n_spin_orbitals: int, mapping: Mapping,
                     n_electrons: int) -> QubitOperator:
    return map_operator(
        excitation_generator(exc, n_spin_orbitals), mapping, n_electrons
    )


def _append_uccsd(circuit: Circuit, excitations: ExcitationList,
                  mapping: Mapping, n_electrons: int) -> None:
    for slot, exc in enumerate(list(excitations.singles) + list(excitations.doubles)):
        mapped = mapped_generator(exc, excitations.n_spin_orbitals, mapping, n_electrons)
        for string, coeff in mapped.terms():
            if abs(coeff.real) > 1e-10:
                raise DomainError("excitation generator mapped to non-imaginary term")
            # exp(theta * i*c*P) = exp(-i ((-2c) theta) P / 2)
            circuit.pauli_rotation(string, slot=slot, prefactor=-2.0 * coeff.imag)


def build_ansatz_circuit(spec: AnsatzSpec, n_spin_orbitals: int, n_electrons: int,
                         mapping: Mapping) -> Circuit:
    """Trial-state circuit acting on the mapping's register, |0...0> start.

    UCCSD prepares the Hartree-Fock basis state with X gates first; TwoLocal
    is the bare rotation/entangler pattern.
    """
    if mapping is Mapping.PARITY_REDUCED:
        n_qubits = n_spin_orbitals - 2
    else:
        n_qubits = n_spin_orbitals
    if spec.kind is AnsatzKind.UCCSD:
        excitations = uccsd_excitations(n_spin_orbitals, n_electrons)
        circuit = Circuit(n_qubits, n_params=excitations.n_parameters)
        hf_index = hf_reference(n_spin_orbitals, n_electrons, mapping)
        for q in range(n_qubits):
            if (hf_index >> q) & 1:
                circuit.x(q)
        _append_uccsd(circuit, excitations, mapping, n_electrons)
        return circuit

    n_ry = sum(1 for b in spec.rotation_blocks if b == "ry")
    n_params = n_qubits * n_ry * (spec.repetitions + 1)
    circuit = Circuit(n_qubits, n_params=n_params)
    slot = 0

    def rotation_column():
        nonlocal slot
        for block in spec.rotation_blocks:
            for q in range(n_qubits):
                if block == "h":
                    circuit.h(q)
                else:
                    circuit.ry(q, slot=slot)
                    slot += 1

    def entangler_column():
        if spec.entanglement == "linear":
            pairs = [(q, q + 1) for q in range(n_qubits - 1)]
        else:
            pairs = [(a, b) for a in range(n_qubits) for b in range(a + 1, n_qubits)]
        for a, b in pairs:
            getattr(circuit, spec.entangler)(a, b)

    for _ in range(spec.repetitions):
        rotation_column()
        entangler_column()
    rotation_column()
    return circuit


class GradientMode(enum.Enum):
    EXACT_SUBGATE = "exact-subgate"
    NAIVE_TWOTERM = "naive-twoterm"


def shift_rule_gradient(circuit: Circuit, params, op: QubitOperator,
                        backend: BackendSpec | EnergyEvaluator,
                        mode: GradientMode = GradientMode.EXACT_SUBGATE,
                        rng=None, on_eval=None) -> np.ndarray:
    """Parameter-shift gradient of <op> under the chosen (mis)application.

    `on_eval(value)` is invoked once per energy evaluation so callers can
    keep exact evaluation budgets.
    """
    evaluator = (
        backend
        if isinstance(backend, EnergyEvaluator)
        else EnergyEvaluator(circuit, op, backend, rng)
    )
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.n_params,):
        raise DimensionError("parameter vector length mismatch")

    def energy(p, shift=None):
        value = evaluator.energy(p, shift)
        if on_eval is not None:
            on_eval(value)
        return value

    grad = np.zeros(circuit.n_params)
    if mode is GradientMode.NAIVE_TWOTERM:
        for j in range(circuit.n_params):
            step = np.zeros_like(params)
            step[j] = math.pi / 2
            grad[j] = 0.5 * (energy(params + step) - energy(params - step))
        return grad

    for ordinal, (_, gate) in enumerate(circuit.parameterized_gates()):
        if gate.kind not in ROTATION_KINDS:
            raise UnsupportedGateError(
                f"parameterized {gate.kind!r} gate has no two-eigenvalue shift rule"
            )
        e_plus = energy(params, (ordinal, math.pi / 2))
        e_minus = energy(params, (ordinal, -math.pi / 2))
        grad[gate.slot] += gate.prefactor * 0.5 * (e_plus - e_minus)
    return grad
