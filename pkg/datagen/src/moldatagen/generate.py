"""Fixture generation: per-geometry RHF -> active space -> moldata JSON."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .fci import fci_ground_state, hf_energy_check
from .molecules import H2O_ANGLE_DEG, MoleculeSpec, molecule_spec
from .scf import ScfError, extract_active_space, run_rhf

GENERATOR = "moldatagen/0.1.0"
BASIS_LABEL = "sto-3g"


def moldata_document(spec: MoleculeSpec, r: float) -> dict:
    """All file content for one grid point (raises ScfError on non-convergence)."""
    coords = spec.geometry_bohr(r)
    scf = run_rhf(list(spec.symbols), coords)
    active = extract_active_space(scf, spec.n_frozen, spec.n_active)

    check = hf_energy_check(active)
    if abs(check - scf.e_total) > 1e-8:
        raise ScfError(
            f"active-space fold-in inconsistent: {check!r} vs SCF {scf.e_total!r}"
        )
    fci_energy, fci_dipole, _, _ = fci_ground_state(active)

    m = spec.n_active
    doc = {
        "version": "moldata/1",
        "name": spec.name,
        "geometry_param_angstrom": float(r),
        "n_spatial": m,
        "n_electrons": active.n_active_electrons,
        "core_energy": active.core_energy,
        "hf_energy": scf.e_total,
        "h1": [float(v) for v in active.h1.ravel()],
        "h2": [float(v) for v in active.h2_phys.ravel()],
        "dipole": {
            "x": [float(v) for v in active.dipole[0].ravel()],
            "y": [float(v) for v in active.dipole[1].ravel()],
            "z": [float(v) for v in active.dipole[2].ravel()],
            "nuclear": [float(v) for v in active.dipole_constant],
        },
        "metadata": {
            "generator": GENERATOR,
            "basis": BASIS_LABEL,
            "n_frozen": spec.n_frozen,
            "fci_energy": fci_energy,
            "fci_dipole": [float(v) for v in fci_dipole],
            "orbital_energies": [float(v) for v in scf.mo_energies],
        },
    }
    if spec.name == "H2O":
        doc["metadata"]["angle_deg"] = H2O_ANGLE_DEG
    return doc


def _atomic_write(path: Path, text: str):
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def generate(molecule: str, grid, out_dir: str | Path, verbose=print) -> dict:
    """Write one moldata file per converged grid point plus a manifest."""
    spec = molecule_spec(molecule)
    points = list(grid) if grid is not None else list(spec.default_grid)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    skipped = []
    for r in points:
        name = f"{spec.name.lower()}_r{r:05.2f}.json"
        try:
            doc = moldata_document(spec, r)
        except ScfError as exc:
            skipped.append({"r_angstrom": float(r), "reason": str(exc)})
            verbose(f"  skip r={r:.2f}: {exc}")
            continue
        text = json.dumps(doc)
        _atomic_write(out / name, text)
        files.append(
            {
                "file": name,
                "r_angstrom": float(r),
                "sha256": hashlib.sha256(text.encode()).hexdigest(),
            }
        )
        verbose(f"  wrote {name} (hf={doc['hf_energy']:.6f}, fci={doc['metadata']['fci_energy']:.6f})")
    manifest = {
        "molecule": spec.name,
        "basis": BASIS_LABEL,
        "generator": GENERATOR,
        "n_frozen": spec.n_frozen,
        "n_active": spec.n_active,
        "files": files,
        "skipped": skipped,
    }
    _atomic_write(out / "manifest.json", json.dumps(manifest, indent=1))
    return manifest


def parse_grid(text: str) -> list[float]:
    """Grid syntax: 'start:stop:count' or comma-separated points."""
    if ":" in text:
        start, stop, count = text.split(":")
        return [float(x) for x in np.linspace(float(start), float(stop), int(count))]
    return [float(x) for x in text.split(",") if x.strip()]
