"""Determinant-basis exact diagonalization of active-space Hamiltonians.

Independent of the qubit pipeline: determinants are occupation bitmasks
over blocked spin orbitals and matrix elements come straight from ladder
rules, so this doubles as the cross-check oracle for the mapped operators.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .scf import ActiveSpace


def _apply_factors(det: int, factors) -> tuple[int, int]:
    phase = 1
    for mode, create in reversed(factors):
        occupied = (det >> mode) & 1
        if create == bool(occupied):
            return 0, 0
        if ((det & ((1 << mode) - 1)).bit_count()) % 2:
            phase = -phase
        det ^= 1 << mode
    return phase, det


def _determinants(m: int, n_alpha: int, n_beta: int) -> list[int]:
    alphas = [sum(1 << p for p in combo) for combo in combinations(range(m), n_alpha)]
    betas = [sum(1 << p for p in combo) for combo in combinations(range(m), n_beta)]
    return [a | (b << m) for a in alphas for b in betas]


def _hamiltonian_terms(active: ActiveSpace):
    m = active.n_active
    h1, h2 = active.h1, active.h2_phys
    for p in range(m):
        for q in range(m):
            c = h1[p, q]
            if abs(c) < 1e-14:
                continue
            for s in (0, m):
                yield c, ((s + p, True), (s + q, False))
    for p in range(m):
        for q in range(m):
            for r in range(m):
                for s_ in range(m):
                    c = 0.5 * h2[p, q, r, s_]
                    if abs(c) < 1e-14:
                        continue
                    for sp1 in (0, m):
                        for sp2 in (0, m):
                            yield c, (
                                (sp1 + p, True),
                                (sp2 + q, True),
                                (sp2 + s_, False),
                                (sp1 + r, False),
                            )


def _build_matrix(dets, index, terms) -> np.ndarray:
    dim = len(dets)
    h = np.zeros((dim, dim))
    for coeff, factors in terms:
        for col, det in enumerate(dets):
            phase, new = _apply_factors(det, factors)
            if phase:
                h[index[new], col] += phase * coeff
    return h


def fci_ground_state(active: ActiveSpace):
    """(total energy, dipole 3-vector, ground vector, determinant list)."""
    m = active.n_active
    n_e = active.n_active_electrons
    n_alpha = (n_e + 1) // 2
    n_beta = n_e - n_alpha
    dets = _determinants(m, n_alpha, n_beta)
    index = {d: i for i, d in enumerate(dets)}
    h = _build_matrix(dets, index, _hamiltonian_terms(active))
    vals, vecs = np.linalg.eigh(h)
    ground = vecs[:, 0]
    energy = float(vals[0] + active.core_energy)

    dipole = np.array(active.dipole_constant, dtype=float)
    for axis in range(3):
        d = active.dipole[axis]
        terms = []
        for p in range(m):
            for q in range(m):
                c = -d[p, q]
                if abs(c) < 1e-14:
                    continue
                for s in (0, m):
                    terms.append((c, ((s + p, True), (s + q, False))))
        if terms:
            dm = _build_matrix(dets, index, terms)
            dipole[axis] += float(ground @ dm @ ground)
    return energy, dipole, ground, dets


def hf_energy_check(active: ActiveSpace) -> float:
    """<HF|H|HF> in the determinant basis (should equal the SCF total energy)."""
    m = active.n_active
    n_e = active.n_active_electrons
    n_alpha = (n_e + 1) // 2
    n_beta = n_e - n_alpha
    det = sum(1 << p for p in range(n_alpha)) | (
        sum(1 << p for p in range(n_beta)) << m
    )
    e = active.core_energy
    for coeff, factors in _hamiltonian_terms(active):
        phase, new = _apply_factors(det, factors)
        if phase and new == det:
            e += phase * coeff
    return float(e)
