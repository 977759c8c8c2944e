"""Ansatz construction and parameter-shift gradient tests."""

import itertools
import math

import numpy as np
import pytest
from scipy.linalg import expm

from vqebench.ansatz import (
    AnsatzKind,
    AnsatzSpec,
    GradientMode,
    build_ansatz_circuit,
    excitation_generator,
    mapped_generator,
    shift_rule_gradient,
    uccsd_excitations,
)
from vqebench.backend import BackendSpec, Circuit, EnergyEvaluator, Gate, run_statevector
from vqebench.errors import UnsupportedGateError
from vqebench.fermion import Mapping, hf_reference, jordan_wigner, number_operator
from vqebench.pauli import QubitOperator


def brute_force_excitations(n_so, n_e):
    """Independent enumeration over spin-conserving index tuples."""
    half = n_so // 2
    n_a = (n_e + 1) // 2
    occ = set(range(n_a)) | {half + p for p in range(n_e - n_a)}
    virt = [p for p in range(n_so) if p not in occ]
    spin = lambda p: p >= half
    singles = {(i, k) for i in occ for k in virt if spin(i) == spin(k)}
    doubles = set()
    for i, j in itertools.combinations(sorted(occ), 2):
        for k, l in itertools.combinations(sorted(virt), 2):
            if sorted((spin(i), spin(j))) == sorted((spin(k), spin(l))):
                doubles.add((i, j, k, l))
    return singles, doubles


@pytest.mark.parametrize("n_so,n_e", [(4, 2), (6, 2), (6, 4), (8, 4)])
def test_excitations_match_enumeration_oracle(n_so, n_e):
    exc = uccsd_excitations(n_so, n_e)
    singles, doubles = brute_force_excitations(n_so, n_e)
    assert set(exc.singles) == singles
    assert set(exc.doubles) == doubles
    assert len(set(exc.singles)) == len(exc.singles)


def test_h2_parameter_count():
    exc = uccsd_excitations(4, 2)
    assert len(exc.singles) == 2 and len(exc.doubles) == 1
    assert exc.n_parameters == 3


def test_six_orbitals_two_electrons_singles():
    exc = uccsd_excitations(6, 2)
    assert len(exc.singles) == 4


def test_degenerate_active_space_warns_empty():
    with pytest.warns(UserWarning):
        exc = uccsd_excitations(2, 2)
    assert exc.n_parameters == 0


@pytest.mark.parametrize("mapping", [Mapping.JW, Mapping.PARITY_REDUCED])
def test_uccsd_identity_at_zero_parameters(mapping):
    circuit = build_ansatz_circuit(AnsatzSpec(AnsatzKind.UCCSD), 4, 2, mapping)
    state = run_statevector(circuit, np.zeros(circuit.n_params))
    hf_index = hf_reference(4, 2, mapping)
    assert abs(abs(state[hf_index]) - 1.0) < 1e-12


@pytest.mark.parametrize("mapping", [Mapping.JW, Mapping.PARITY_REDUCED])
def test_single_excitation_circuit_matches_matrix_exponential(mapping):
    # each excitation's strings commute, so one Trotter factor is exact
    n_so, n_e = 4, 2
    exc_list = uccsd_excitations(n_so, n_e)
    for exc in list(exc_list.singles) + list(exc_list.doubles):
        mapped = mapped_generator(exc, n_so, mapping, n_e)
        n_q = mapped.n_qubits
        theta = 0.437
        circuit = Circuit(n_q, n_params=1)
        hf_index = hf_reference(n_so, n_e, mapping)
        for q in range(n_q):
            if (hf_index >> q) & 1:
                circuit.x(q)
        for string, coeff in mapped.terms():
            circuit.pauli_rotation(string, slot=0, prefactor=-2.0 * coeff.imag)
        got = run_statevector(circuit, [theta])
        hf_vec = np.zeros(1 << n_q)
        hf_vec[hf_index] = 1.0
        expected = expm(theta * mapped.to_matrix()) @ hf_vec
        np.testing.assert_allclose(got, expected, atol=1e-12)


def test_uccsd_excitation_factors_conserve_particle_number():
    # The strings inside one excitation commute, so the circuit applies
    # exactly exp(theta * G); G itself commutes with the mapped number
    # operator, hence each excitation factor conserves particle number.
    n_so, n_e = 6, 4
    nop = jordan_wigner(number_operator(n_so)).to_matrix()
    exc_list = uccsd_excitations(n_so, n_e)
    for exc in list(exc_list.singles) + list(exc_list.doubles):
        mapped = mapped_generator(exc, n_so, Mapping.JW, n_e)
        g = mapped.to_matrix()
        np.testing.assert_allclose(g @ nop - nop @ g, 0, atol=1e-12)
        strings = [QubitOperator.from_term(s).to_matrix() for s, _ in mapped.terms()]
        for a in strings:
            for b in strings:
                np.testing.assert_allclose(a @ b, b @ a, atol=1e-12)


def test_twolocal_fig_pattern_linear_single_rep():
    spec = AnsatzSpec(
        AnsatzKind.TWO_LOCAL, rotation_blocks=("h", "ry"),
        entangler="cz", entanglement="linear", repetitions=1,
    )
    circuit = build_ansatz_circuit(spec, 5, 0, Mapping.PARITY_REDUCED)  # 3 qubits
    assert circuit.n_qubits == 3
    kinds = [(g.kind, g.qubits) for g in circuit.gates]
    expected = (
        [("h", (q,)) for q in range(3)]
        + [("ry", (q,)) for q in range(3)]
        + [("cz", (0, 1)), ("cz", (1, 2))]
        + [("h", (q,)) for q in range(3)]
        + [("ry", (q,)) for q in range(3)]
    )
    assert kinds == expected
    assert circuit.n_params == 3 * 1 * (1 + 1)


@pytest.mark.parametrize("reps,n_qubits", [(1, 2), (2, 3), (3, 4)])
def test_twolocal_parameter_count(reps, n_qubits):
    spec = AnsatzSpec(AnsatzKind.TWO_LOCAL, repetitions=reps)
    circuit = build_ansatz_circuit(spec, n_qubits + 2, 0, Mapping.PARITY_REDUCED)
    assert circuit.n_params == n_qubits * (reps + 1)


def z_evaluator(circuit):
    op = QubitOperator.from_labels(circuit.n_qubits, {"Z" * circuit.n_qubits: 1.0})
    if circuit.n_qubits == 1:
        op = QubitOperator.from_labels(1, {"Z": 1.0})
    return EnergyEvaluator(circuit, op, BackendSpec("statevector"))


def test_shift_gradient_ry_extremum_and_slope():
    circuit = Circuit(1, n_params=1).ry(0, slot=0)
    op = QubitOperator.from_labels(1, {"Z": 1.0})
    grad0 = shift_rule_gradient(circuit, [0.0], op, BackendSpec())
    assert grad0[0] == pytest.approx(0.0, abs=1e-12)
    grad = shift_rule_gradient(circuit, [math.pi / 2], op, BackendSpec())
    # finite-difference oracle on d<Z>/dtheta = -sin(theta)
    h = 1e-6
    ev = EnergyEvaluator(circuit, op, BackendSpec())
    fd = (ev.energy([math.pi / 2 + h]) - ev.energy([math.pi / 2 - h])) / (2 * h)
    assert grad[0] == pytest.approx(fd, abs=1e-6)
    assert grad[0] == pytest.approx(-1.0, abs=1e-9)


def finite_difference(evaluator, params, h=1e-5):
    params = np.asarray(params, dtype=float)
    g = np.zeros_like(params)
    for j in range(params.size):
        step = np.zeros_like(params)
        step[j] = h
        g[j] = (evaluator.energy(params + step) - evaluator.energy(params - step)) / (2 * h)
    return g


@pytest.mark.parametrize("mapping", [Mapping.JW, Mapping.PARITY_REDUCED])
def test_exact_subgate_matches_finite_differences_h2(mapping, h2_fixture):
    from vqebench.moldata import build_hamiltonian

    ham = build_hamiltonian(h2_fixture, mapping)
    circuit = build_ansatz_circuit(AnsatzSpec(AnsatzKind.UCCSD), 4, 2, mapping)
    evaluator = EnergyEvaluator(circuit, ham, BackendSpec())
    rng = np.random.default_rng(0)
    for _ in range(5):
        params = rng.uniform(-0.5, 0.5, size=circuit.n_params)
        exact = shift_rule_gradient(circuit, params, ham, evaluator, GradientMode.EXACT_SUBGATE)
        fd = finite_difference(evaluator, params)
        np.testing.assert_allclose(exact, fd, atol=1e-6)


def test_naive_twoterm_deviates_on_jw_double(h2_fixture):
    from vqebench.moldata import build_hamiltonian

    ham = build_hamiltonian(h2_fixture, Mapping.JW)
    circuit = build_ansatz_circuit(AnsatzSpec(AnsatzKind.UCCSD), 4, 2, Mapping.JW)
    evaluator = EnergyEvaluator(circuit, ham, BackendSpec())
    params = np.array([0.21, -0.17, 0.31])
    naive = shift_rule_gradient(circuit, params, ham, evaluator, GradientMode.NAIVE_TWOTERM)
    fd = finite_difference(evaluator, params)
    assert abs(naive[2] - fd[2]) > 1e-3  # double-excitation slot is biased


def test_unsupported_parameterized_gate_rejected():
    circuit = Circuit(1, n_params=1)
    circuit.add(Gate("h", (0,), slot=0))
    op = QubitOperator.from_labels(1, {"Z": 1.0})
    with pytest.raises(UnsupportedGateError):
        shift_rule_gradient(circuit, [0.3], op, BackendSpec())
