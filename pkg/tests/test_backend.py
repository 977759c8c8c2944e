"""Statevector, expectation, and sampling tests against dense oracles."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

import vqebench.backend as backend_mod
from vqebench.backend import (
    Circuit,
    NoiseProfile,
    expectation_exact,
    expectation_sampled,
    run_statevector,
)
from vqebench.errors import DimensionError, DomainError, SchemaError
from vqebench.pauli import PauliString, QubitOperator


def gate_matrix_oracle(n, gate, angle):
    """Independent dense matrix for one gate, built from Pauli algebra + expm."""

    def pauli_mat(label):
        return QubitOperator.from_labels(n, {label: 1.0}).to_matrix()

    def at(q, axis):
        label = "".join(axis if k == q else "I" for k in range(n))
        return pauli_mat(label)

    eye = np.eye(1 << n)
    kind = gate.kind
    if kind == "h":
        q = gate.qubits[0]
        return (at(q, "X") + at(q, "Z")) / math.sqrt(2)
    if kind == "x":
        return at(gate.qubits[0], "X")
    if kind in ("rx", "ry", "rz"):
        axis = {"rx": "X", "ry": "Y", "rz": "Z"}[kind]
        return expm(-0.5j * angle * at(gate.qubits[0], axis))
    if kind == "cnot":
        c, t = gate.qubits
        return 0.5 * (eye + at(c, "Z") + at(t, "X") - at(c, "Z") @ at(t, "X"))
    if kind == "cz":
        a, b = gate.qubits
        return 0.5 * (eye + at(a, "Z") + at(b, "Z") - at(a, "Z") @ at(b, "Z"))
    if kind == "prot":
        return expm(-0.5j * angle * gate.pauli.to_matrix())
    raise AssertionError(kind)


def random_circuit(n, n_gates, rng):
    c = Circuit(n, n_params=0)
    for _ in range(n_gates):
        kind = rng.choice(["h", "x", "rx", "ry", "rz", "cnot", "cz", "prot"])
        if kind in ("h", "x"):
            getattr(c, kind)(int(rng.integers(n)))
        elif kind in ("rx", "ry", "rz"):
            getattr(c, kind)(int(rng.integers(n)), angle=float(rng.uniform(-np.pi, np.pi)))
        elif kind in ("cnot", "cz"):
            a, b = rng.choice(n, size=2, replace=False)
            getattr(c, kind)(int(a), int(b))
        else:
            label = "".join(rng.choice(list("IXYZ"), n))
            if set(label) == {"I"}:
                label = "Z" + label[1:]
            c.pauli_rotation(PauliString.from_label(label), angle=float(rng.uniform(-np.pi, np.pi)))
    return c


def test_empty_circuit_is_basis_state():
    state = run_statevector(Circuit(2))
    np.testing.assert_allclose(state, [1, 0, 0, 0])


def test_single_hadamard():
    c = Circuit(1).h(0)
    np.testing.assert_allclose(run_statevector(c), [1 / math.sqrt(2)] * 2)


def test_pauli_rotation_z_equals_rz_on_plus():
    theta = 0.731
    prot = Circuit(1).h(0).pauli_rotation(PauliString.from_label("Z"), angle=theta)
    rz = Circuit(1).h(0).rz(0, angle=theta)
    np.testing.assert_allclose(run_statevector(prot), run_statevector(rz), atol=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_random_circuits_match_dense_unitary_oracle(seed):
    rng = np.random.default_rng(seed)
    n = 3
    c = random_circuit(n, 20, rng)
    u = np.eye(1 << n, dtype=complex)
    for gate in c.gates:
        u = gate_matrix_oracle(n, gate, gate.angle) @ u
    got = run_statevector(c)
    np.testing.assert_allclose(got, u[:, 0], atol=1e-10)


@pytest.mark.parametrize("seed", range(3))
def test_norm_preserved_after_every_gate(seed):
    rng = np.random.default_rng(100 + seed)
    c = random_circuit(3, 15, rng)
    for k in range(1, len(c.gates) + 1):
        prefix = Circuit(3)
        for g in c.gates[:k]:
            prefix.add(g)
        state = run_statevector(prefix)
        assert abs(np.linalg.norm(state) - 1.0) < 1e-10


@pytest.mark.parametrize("seed", range(4))
def test_compiled_primitives_equivalent_up_to_global_phase(seed):
    rng = np.random.default_rng(200 + seed)
    c = random_circuit(3, 12, rng)
    a = run_statevector(c)
    b = run_statevector(c.compiled_primitives())
    assert abs(abs(np.vdot(a, b)) - 1.0) < 1e-10


def test_initial_basis_index():
    c = Circuit(2)
    state = run_statevector(c, initial_index=0b01)
    np.testing.assert_allclose(state, [0, 1, 0, 0])


def test_slot_count_mismatch_raises():
    c = Circuit(1, n_params=2).ry(0, slot=0)
    with pytest.raises(DimensionError):
        run_statevector(c, [0.1])


def test_expectation_exact_examples():
    zero = run_statevector(Circuit(1))
    plus = run_statevector(Circuit(1).h(0))
    z = QubitOperator.from_labels(1, {"Z": 1.0})
    assert expectation_exact(zero, z) == pytest.approx(1.0)
    assert expectation_exact(plus, z) == pytest.approx(0.0, abs=1e-12)


def test_expectation_exact_matches_dense_quadratic_form():
    rng = np.random.default_rng(5)
    n = 3
    for _ in range(10):
        state = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        state /= np.linalg.norm(state)
        labels = ["".join(rng.choice(list("IXYZ"), n)) for _ in range(4)]
        op = QubitOperator.from_labels(n, {lab: rng.normal() for lab in labels})
        expected = np.real(state.conj() @ op.to_matrix() @ state)
        assert expectation_exact(state, op) == pytest.approx(expected, abs=1e-12)


def test_expectation_exact_rejects_non_hermitian():
    with pytest.raises(DomainError):
        expectation_exact(run_statevector(Circuit(1)), QubitOperator.from_labels(1, {"X": 1j}))


def test_sampled_identity_is_analytic():
    op = QubitOperator.identity(2, 2.5)
    mean, err = expectation_sampled(Circuit(2), None, op, shots=7, rng=0)
    assert mean == 2.5 and err == 0.0


def test_sampled_shots_zero_rejected():
    with pytest.raises(DomainError):
        expectation_sampled(Circuit(1), None, QubitOperator.identity(1), shots=0)


def test_sampled_noiseless_matches_exact_within_stderr():
    c = Circuit(2).ry(0, angle=0.9).cnot(0, 1).ry(1, angle=-0.4)
    op = QubitOperator.from_labels(2, {"ZI": 0.7, "XX": -0.3, "YZ": 0.5, "II": 0.2})
    exact = expectation_exact(run_statevector(c), op)
    mean, err = expectation_sampled(c, None, op, shots=200_000, rng=42)
    assert abs(mean - exact) < 5 * err


def test_sampled_y_basis_sign_convention():
    c = Circuit(1).rx(0, angle=0.7)
    op = QubitOperator.from_labels(1, {"Y": 1.0})
    exact = expectation_exact(run_statevector(c), op)
    assert exact == pytest.approx(-math.sin(0.7))
    mean, err = expectation_sampled(c, None, op, shots=400_000, rng=3)
    assert abs(mean - exact) < 5 * err


def test_readout_bias_analytic():
    # |0>, measure Z with symmetric flip p: mean -> 1 - 2p
    p = 0.07
    noise = NoiseProfile(readout=((p, p),))
    op = QubitOperator.from_labels(1, {"Z": 1.0})
    mean, err = expectation_sampled(Circuit(1).x(0).x(0), None, op, shots=400_000,
                                    noise=noise, rng=11)
    assert mean == pytest.approx(1 - 2 * p, abs=5 * err)


def test_stderr_scales_inverse_sqrt_shots():
    c = Circuit(1).h(0)
    op = QubitOperator.from_labels(1, {"Z": 1.0})
    errs = {}
    for shots in (10**2, 10**4, 10**6):
        _, err = expectation_sampled(c, None, op, shots=shots, rng=13)
        errs[shots] = err
    assert errs[100] / errs[10**4] == pytest.approx(10.0, rel=0.2)
    assert errs[10**4] / errs[10**6] == pytest.approx(10.0, rel=0.2)


@pytest.mark.parametrize("axis", ["X", "Y", "Z"])
def test_full_depolarizing_kills_polarization(axis):
    noise = NoiseProfile(p1=1.0)
    c = Circuit(1).ry(0, angle=0.7)
    op = QubitOperator.from_labels(1, {axis: 1.0})
    mean, err = expectation_sampled(c, None, op, shots=100_000, noise=noise, rng=17)
    assert abs(mean) < 5 * max(err, 1e-3)


def test_trajectory_path_agrees_with_channel_path(monkeypatch):
    c = Circuit(2).h(0).cnot(0, 1).ry(1, angle=0.6)
    op = QubitOperator.from_labels(2, {"ZZ": 1.0, "XI": 0.4})
    noise = NoiseProfile(p1=0.05, p2=0.1, readout=((0.02, 0.03),) )
    mean_ch, _ = expectation_sampled(c, None, op, shots=150_000, noise=noise, rng=23)
    monkeypatch.setattr(backend_mod, "_CHANNEL_PATH_MAX_QUBITS", 0)
    mean_tr, err_tr = expectation_sampled(c, None, op, shots=150_000, noise=noise, rng=23)
    assert mean_tr == pytest.approx(mean_ch, abs=6 * max(err_tr, 1e-3))


def test_noise_profile_json_round_trip():
    noise = NoiseProfile(p1=1e-3, p2=1e-2, readout=((0.02, 0.02), (0.01, 0.03)))
    again = NoiseProfile.from_json(noise.to_json())
    assert again == noise
    with pytest.raises(DomainError):
        NoiseProfile(p1=1.5)
    with pytest.raises(SchemaError):
        NoiseProfile.from_json('{"p1": 0.1, "bogus": 2}')
    with pytest.raises(SchemaError):
        NoiseProfile.from_json("not json")
