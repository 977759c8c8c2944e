"""Restricted Hartree-Fock with DIIS, plus MO-basis transformations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import NUCLEAR_CHARGE, build_basis
from .integrals import (
    dipole_matrices,
    eri_tensor,
    kinetic_matrix,
    nuclear_matrix,
    overlap_matrix,
)


class ScfError(RuntimeError):
    """SCF failed to converge or the overlap matrix is near-singular."""


@dataclass
class ScfResult:
    e_total: float
    e_nuclear: float
    mo_energies: np.ndarray
    mo_coeff: np.ndarray  # columns are MOs in the AO basis
    h_core: np.ndarray
    eri: np.ndarray  # chemists' (ij|kl), AO basis
    dipole_ao: tuple[np.ndarray, np.ndarray, np.ndarray]
    nuclear_dipole: np.ndarray
    n_electrons: int


def nuclear_repulsion(symbols, coords) -> float:
    e = 0.0
    for i in range(len(symbols)):
        for j in range(i):
            r = np.linalg.norm(coords[i] - coords[j])
            e += NUCLEAR_CHARGE[symbols[i]] * NUCLEAR_CHARGE[symbols[j]] / r
    return e


def run_rhf(symbols, coords_bohr, max_cycles=400, e_tol=1e-11, d_tol=1e-8,
            diis_size=8) -> ScfResult:
    """Closed-shell SCF with DIIS; retries with level shift and damping
    before giving up (stretched ionic molecules oscillate otherwise)."""
    coords = np.asarray(coords_bohr, dtype=float)
    n_electrons = sum(NUCLEAR_CHARGE[s] for s in symbols)
    if n_electrons % 2:
        raise ScfError("RHF needs an even electron count")
    n_occ = n_electrons // 2
    aos = build_basis(symbols, coords)
    s = overlap_matrix(aos)
    t = kinetic_matrix(aos)
    v = nuclear_matrix(aos, symbols, coords, NUCLEAR_CHARGE)
    h_core = t + v
    eri = eri_tensor(aos)

    s_vals, s_vecs = np.linalg.eigh(s)
    if s_vals.min() < 1e-7:
        raise ScfError(f"near-singular overlap (min eigenvalue {s_vals.min():.2e})")
    x = s_vecs @ np.diag(s_vals**-0.5) @ s_vecs.T
    n_basis = s.shape[0]

    def fock(dm):
        j = np.einsum("pqrs,rs->pq", eri, dm)
        k = np.einsum("prqs,rs->pq", eri, dm)
        return h_core + j - 0.5 * k

    def density_from_fock(f, level_shift, dm_prev):
        fp = x.T @ f @ x
        if level_shift and dm_prev is not None:
            # shift virtual levels up, referenced to the previous density
            dp = 0.5 * (x.T @ s @ dm_prev @ s @ x)  # occupied projector (idempotent*2)
            fp = fp + level_shift * (np.eye(n_basis) - dp)
        energies, cp = np.linalg.eigh(fp)
        c = x @ cp
        occ = c[:, :n_occ]
        return 2.0 * occ @ occ.T, energies, c

    def attempt(level_shift, damping):
        dm, mo_e, mo_c = density_from_fock(h_core, 0.0, None)
        e_old = None
        fock_list: list[np.ndarray] = []
        err_list: list[np.ndarray] = []
        for cycle in range(max_cycles):
            f = fock(dm)
            err = x.T @ (f @ dm @ s - s @ dm @ f) @ x
            fock_list.append(f)
            err_list.append(err)
            if len(fock_list) > diis_size:
                fock_list.pop(0)
                err_list.pop(0)
            if len(fock_list) > 1:
                m = len(fock_list)
                b = -np.ones((m + 1, m + 1))
                b[m, m] = 0.0
                for i in range(m):
                    for j in range(m):
                        b[i, j] = np.vdot(err_list[i], err_list[j])
                rhs = np.zeros(m + 1)
                rhs[m] = -1.0
                try:
                    weights = np.linalg.solve(b, rhs)[:m]
                    f = sum(w * fk for w, fk in zip(weights, fock_list))
                except np.linalg.LinAlgError:
                    pass
            dm_new, mo_e, mo_c = density_from_fock(f, level_shift, dm)
            if damping and cycle < max_cycles // 2:
                dm_new = (1.0 - damping) * dm_new + damping * dm
            dm = dm_new
            e_elec = 0.5 * np.einsum("pq,pq->", dm, h_core + fock(dm))
            converged = (
                e_old is not None
                and abs(e_elec - e_old) < e_tol
                and np.abs(err).max() < d_tol
            )
            e_old = e_elec
            if converged:
                return e_elec, mo_e, mo_c
        return None

    result = None
    for level_shift, damping in ((0.0, 0.0), (0.3, 0.2), (1.0, 0.4), (2.5, 0.6)):
        result = attempt(level_shift, damping)
        if result is not None:
            break
    if result is None:
        raise ScfError("SCF did not converge")
    e_old, mo_e, mo_c = result

    e_nuc = nuclear_repulsion(symbols, coords)
    nuc_dip = sum(
        NUCLEAR_CHARGE[sym] * coords[i] for i, sym in enumerate(symbols)
    )
    return ScfResult(
        e_total=float(np.real(e_old) + e_nuc),
        e_nuclear=e_nuc,
        mo_energies=mo_e,
        mo_coeff=mo_c,
        h_core=h_core,
        eri=eri,
        dipole_ao=dipole_matrices(aos),
        nuclear_dipole=np.asarray(nuc_dip, dtype=float),
        n_electrons=n_electrons,
    )


@dataclass
class ActiveSpace:
    """Active-space integrals with the frozen core folded into constants."""

    n_active: int
    n_frozen: int
    n_active_electrons: int
    core_energy: float  # nuclear repulsion + frozen-core energy
    h1: np.ndarray  # effective one-electron integrals, active window
    h2_phys: np.ndarray  # <pq|rs>, active window
    dipole: tuple[np.ndarray, np.ndarray, np.ndarray]  # active window, MO basis
    dipole_constant: np.ndarray  # nuclear minus frozen-core electronic part


def extract_active_space(scf: ScfResult, n_frozen: int, n_active: int) -> ActiveSpace:
    c = scf.mo_coeff
    n_mo = c.shape[1]
    if n_frozen + n_active > n_mo:
        raise ScfError("active window exceeds MO count")
    h1_mo = c.T @ scf.h_core @ c
    eri_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", scf.eri, c, c, c, c, optimize=True)
    frozen = list(range(n_frozen))
    window = list(range(n_frozen, n_frozen + n_active))

    core = 0.0
    for i in frozen:
        core += 2.0 * h1_mo[i, i]
        for j in frozen:
            core += 2.0 * eri_mo[i, i, j, j] - eri_mo[i, j, j, i]
    h1_eff = h1_mo[np.ix_(window, window)].copy()
    for a, p in enumerate(window):
        for b, q in enumerate(window):
            for i in frozen:
                h1_eff[a, b] += 2.0 * eri_mo[p, q, i, i] - eri_mo[p, i, i, q]
    chem = eri_mo[np.ix_(window, window, window, window)]
    h2_phys = chem.transpose(0, 2, 1, 3).copy()

    dip_active = []
    dip_const = scf.nuclear_dipole.copy()
    for d_ao in scf.dipole_ao:
        d_mo = c.T @ d_ao @ c
        dip_active.append(d_mo[np.ix_(window, window)].copy())
        dip_const_axis = -2.0 * sum(d_mo[i, i] for i in frozen)
        dip_const[len(dip_active) - 1] += dip_const_axis
    n_active_electrons = scf.n_electrons - 2 * n_frozen
    return ActiveSpace(
        n_active=n_active,
        n_frozen=n_frozen,
        n_active_electrons=n_active_electrons,
        core_energy=float(scf.e_nuclear + core),
        h1=h1_eff,
        h2_phys=h2_phys,
        dipole=tuple(dip_active),
        dipole_constant=dip_const,
    )
