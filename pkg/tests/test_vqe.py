"""VQE driver tests on the bundled fixtures."""

import numpy as np
import pytest

from vqebench.ansatz import AnsatzKind, AnsatzSpec
from vqebench.backend import BackendSpec, NoiseProfile
from vqebench.errors import DomainError, ResourceLimitError
from vqebench.fermion import Mapping, hf_reference
from vqebench.moldata import build_hamiltonian
from vqebench.pauli import QubitOperator
from vqebench.vqe import VqeProblem, exact_ground_state, vqe_minimize


def h2_problem(fixture, backend=None, mapping=Mapping.PARITY_REDUCED, seed=0,
               ansatz=None):
    ham = build_hamiltonian(fixture, mapping)
    return VqeProblem(
        hamiltonian=ham,
        ansatz=ansatz or AnsatzSpec(AnsatzKind.UCCSD),
        n_spin_orbitals=2 * fixture.n_spatial,
        n_electrons=fixture.n_electrons,
        mapping=mapping,
        backend=backend or BackendSpec(),
        seed=seed,
    )


def test_exact_ground_state_z():
    energy, vector = exact_ground_state(QubitOperator.from_labels(1, {"Z": 1.0}))
    assert energy == -1.0
    np.testing.assert_allclose(np.abs(vector), [0.0, 1.0])


def test_exact_ground_state_matches_matrix_oracle():
    op = QubitOperator.from_labels(2, {"XX": 1.0, "ZZ": 1.0})
    energy, vector = exact_ground_state(op)
    oracle = np.linalg.eigvalsh(op.to_matrix())[0]
    assert energy == pytest.approx(oracle, abs=1e-12)
    m = op.to_matrix()
    np.testing.assert_allclose(m @ vector, energy * vector, atol=1e-10)


def test_exact_ground_state_guards():
    with pytest.raises(ResourceLimitError):
        exact_ground_state(QubitOperator.identity(15))
    with pytest.raises(DomainError):
        exact_ground_state(QubitOperator.from_labels(1, {"X": 1j}))


def test_particle_filter_restricts_sector():
    # positive number operator: global ground is the vacuum, N=2 sector is not
    from vqebench.fermion import jordan_wigner, number_operator

    nop = jordan_wigner(number_operator(4))
    e_global, _ = exact_ground_state(nop)
    e_sector, vec = exact_ground_state(nop, particle_filter=(2, Mapping.JW))
    assert e_global == pytest.approx(0.0, abs=1e-12)
    assert e_sector == pytest.approx(2.0, abs=1e-12)
    occupied = [b for b in range(16) if abs(vec[b]) > 1e-12]
    assert all(b.bit_count() == 2 for b in occupied)


def test_h2_statevector_cg_reaches_exact(h2_fixture):
    problem = h2_problem(h2_fixture)
    exact, _ = exact_ground_state(problem.hamiltonian)
    result = vqe_minimize(problem, "cg", max_iter=100)
    rel = abs((exact - result.energy) / exact)
    assert rel <= 1e-6
    assert result.energy >= exact - 1e-9  # variational bound


def test_max_iter_zero_returns_hf_energy(h2_fixture):
    problem = h2_problem(h2_fixture)
    result = vqe_minimize(problem, "cg", max_iter=0)
    assert result.energy == pytest.approx(h2_fixture.hf_energy, abs=1e-8)


@pytest.mark.parametrize("optimizer", ["powell", "cobyla", "nft", "spsa"])
def test_variational_bound_all_optimizers(h2_fixture, optimizer):
    problem = h2_problem(h2_fixture)
    exact, _ = exact_ground_state(problem.hamiltonian)
    result = vqe_minimize(problem, optimizer, max_iter=60)
    assert result.energy >= exact - 1e-9


def test_uccsd_exact_for_two_electrons(h2_series):
    # UCCSD is exact for 2-electron systems: converged energy == FCI
    for fixture in [h2_series.entries[6], h2_series.entries[20], h2_series.entries[-1]]:
        problem = h2_problem(fixture)
        exact, _ = exact_ground_state(problem.hamiltonian)
        result = vqe_minimize(problem, "lbfgs", max_iter=200)
        assert abs(result.energy - exact) < 1e-8


def test_sampled_backend_determinism(h2_fixture):
    backend = BackendSpec("sampled", shots=256)
    a = vqe_minimize(h2_problem(h2_fixture, backend, seed=7), "cobyla", max_iter=25)
    b = vqe_minimize(h2_problem(h2_fixture, backend, seed=7), "cobyla", max_iter=25)
    assert a.energy == b.energy
    np.testing.assert_array_equal(a.params, b.params)
    c = vqe_minimize(h2_problem(h2_fixture, backend, seed=8), "cobyla", max_iter=25)
    assert c.energy != a.energy


def test_sampled_backend_reasonable_accuracy(h2_fixture):
    problem = h2_problem(h2_fixture, BackendSpec("sampled", shots=8192), seed=1)
    exact, _ = exact_ground_state(problem.hamiltonian)
    result = vqe_minimize(problem, "cobyla", max_iter=100)
    assert abs((exact - result.energy) / exact) < 1e-2


def test_noisy_backend_runs_and_biases_upward(h2_fixture):
    noise = NoiseProfile(p1=1e-3, p2=1e-2, readout=((0.02, 0.02),))
    problem = h2_problem(h2_fixture, BackendSpec("sampled", shots=2048, noise=noise), seed=3)
    exact, _ = exact_ground_state(problem.hamiltonian)
    result = vqe_minimize(problem, "spsa", max_iter=60)
    assert result.energy > exact  # noise floor sits above the true ground energy


def test_twolocal_ansatz_reaches_ground(h2_fixture):
    spec = AnsatzSpec(AnsatzKind.TWO_LOCAL, repetitions=2, entanglement="full")
    problem = h2_problem(h2_fixture, ansatz=spec)
    exact, _ = exact_ground_state(problem.hamiltonian)
    result = vqe_minimize(problem, "lbfgs", max_iter=300)
    assert abs(result.energy - exact) < 1e-6


def test_hf_reference_energy_identity(lih_fixture):
    ham = build_hamiltonian(lih_fixture, Mapping.PARITY_REDUCED)
    idx = hf_reference(2 * lih_fixture.n_spatial, lih_fixture.n_electrons,
                       Mapping.PARITY_REDUCED)
    vec = np.zeros(1 << ham.n_qubits)
    vec[idx] = 1.0
    from vqebench.backend import expectation_exact

    assert expectation_exact(vec, ham) == pytest.approx(lih_fixture.hf_energy, abs=1e-8)
