"""Molecular integral ingestion and qubit-Hamiltonian assembly.

Input formats:
  * moldata JSON (version tag "moldata/1"): the native fixture format,
    carrying active-space integrals in Hartree, dipole integral blocks in
    e*a0, and optional generator metadata.
  * FCIDUMP subset: `&FCI NORB=..,NELEC=..` header, `value i j k l` records
    with 1-based chemists' indexing, `0 0 0 0` row = core energy. No dipole
    block, so dipole metrics are unavailable from FCIDUMP input.

Two-electron integrals are stored in the physicists' convention
h[p,q,r,s] = <pq|rs> (p,q bra of electrons 1,2; r,s ket of electrons 1,2);
the FCIDUMP reader transposes chemists' (pr|qs) on ingest.

Spin-orbital expansion uses blocked ordering (all alpha modes, then all
beta), matching :mod:`vqebench.fermion`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SchemaError, SymmetryError, UnsupportedMetricError
from .fermion import FermionOperator, Mapping, map_operator
from .pauli import QubitOperator

SYMMETRY_TOL = 1e-10
AXES = ("x", "y", "z")


@dataclass(frozen=True)
class MolecularData:
    """Active-space integrals for one molecule at one geometry."""

    name: str
    geometry_param: float | None
    n_spatial: int
    n_electrons: int
    core_energy: float
    h1: np.ndarray
    h2: np.ndarray
    dipole_ints: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
    nuclear_dipole: np.ndarray | None = None
    hf_energy: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        m = self.n_spatial
        if m < 1:
            raise SchemaError("n_spatial must be positive")
        if not 0 <= self.n_electrons <= 2 * m:
            raise SchemaError("n_electrons outside 0..2*n_spatial")
        if self.h1.shape != (m, m) or self.h2.shape != (m, m, m, m):
            raise SchemaError("integral arrays have wrong shapes")
        for label, arr in self._finite_blocks():
            if not np.all(np.isfinite(arr)):
                raise SchemaError(f"non-finite entries in {label}")
        if np.abs(self.h1 - self.h1.T).max() > SYMMETRY_TOL:
            raise SymmetryError("h1 is not symmetric")
        h2 = self.h2
        for label, permuted in (
            ("<pq|rs> = <rq|ps>", h2.transpose(2, 1, 0, 3)),
            ("<pq|rs> = <ps|rq>", h2.transpose(0, 3, 2, 1)),
            ("<pq|rs> = <qp|sr>", h2.transpose(1, 0, 3, 2)),
        ):
            if np.abs(h2 - permuted).max() > SYMMETRY_TOL:
                raise SymmetryError(f"h2 violates {label}")
        if (self.dipole_ints is None) != (self.nuclear_dipole is None):
            raise SchemaError("dipole integrals and nuclear dipole must come together")
        if self.dipole_ints is not None:
            for d in self.dipole_ints:
                if d.shape != (m, m):
                    raise SchemaError("dipole integral blocks have wrong shape")
                if np.abs(d - d.T).max() > SYMMETRY_TOL:
                    raise SymmetryError("dipole integrals are not symmetric")

    def _finite_blocks(self):
        yield "h1", self.h1
        yield "h2", self.h2
        yield "core_energy", np.array([self.core_energy])
        if self.dipole_ints is not None:
            for ax, d in zip(AXES, self.dipole_ints):
                yield f"dipole.{ax}", d
            yield "dipole.nuclear", self.nuclear_dipole

    @property
    def n_spin_orbitals(self) -> int:
        return 2 * self.n_spatial

    def to_json(self) -> str:
        doc = {
            "version": "moldata/1",
            "name": self.name,
            "geometry_param_angstrom": self.geometry_param,
            "n_spatial": self.n_spatial,
            "n_electrons": self.n_electrons,
            "core_energy": self.core_energy,
            "hf_energy": self.hf_energy,
            "h1": [float(v) for v in self.h1.ravel()],
            "h2": [float(v) for v in self.h2.ravel()],
        }
        if self.dipole_ints is not None:
            doc["dipole"] = {
                "x": [float(v) for v in self.dipole_ints[0].ravel()],
                "y": [float(v) for v in self.dipole_ints[1].ravel()],
                "z": [float(v) for v in self.dipole_ints[2].ravel()],
                "nuclear": [float(v) for v in self.nuclear_dipole],
            }
        if self.metadata:
            doc["metadata"] = self.metadata
        return json.dumps(doc)


_REQUIRED_JSON_KEYS = {
    "version",
    "name",
    "geometry_param_angstrom",
    "n_spatial",
    "n_electrons",
    "core_energy",
    "hf_energy",
    "h1",
    "h2",
}
_OPTIONAL_JSON_KEYS = {"dipole", "metadata"}


def parse_moldata(data: bytes | str) -> MolecularData:
    """Parse a moldata JSON document or FCIDUMP subset (auto-detected)."""
    text = data.decode() if isinstance(data, bytes) else data
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(stripped)
    if "&FCI" in text:
        return _parse_fcidump(text)
    raise SchemaError("input is neither moldata JSON nor FCIDUMP")


def load_moldata(path: str | Path) -> MolecularData:
    return parse_moldata(Path(path).read_bytes())


def _parse_json(text: str) -> MolecularData:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("top-level JSON value must be an object")
    if raw.get("version") != "moldata/1":
        raise SchemaError(f"unsupported moldata version {raw.get('version')!r}")
    missing = _REQUIRED_JSON_KEYS - raw.keys()
    if missing:
        raise SchemaError(f"missing keys: {sorted(missing)}")
    unknown = raw.keys() - _REQUIRED_JSON_KEYS - _OPTIONAL_JSON_KEYS
    if unknown:
        raise SchemaError(f"unknown keys: {sorted(unknown)}")
    m = int(raw["n_spatial"])
    if m < 1:
        raise SchemaError("n_spatial must be positive")

    def block(values, shape, label):
        arr = np.asarray(values, dtype=float)
        if arr.size != math.prod(shape):
            raise SchemaError(f"{label} has {arr.size} entries, expected {math.prod(shape)}")
        return arr.reshape(shape)

    dipole_ints = None
    nuclear = None
    if "dipole" in raw:
        dip = raw["dipole"]
        if not isinstance(dip, dict) or set(dip) != {"x", "y", "z", "nuclear"}:
            raise SchemaError("dipole block must have keys x, y, z, nuclear")
        dipole_ints = tuple(block(dip[ax], (m, m), f"dipole.{ax}") for ax in AXES)
        nuclear = np.asarray(dip["nuclear"], dtype=float)
        if nuclear.shape != (3,):
            raise SchemaError("nuclear dipole must be a 3-vector")
    geometry = raw["geometry_param_angstrom"]
    hf_energy = raw["hf_energy"]
    return MolecularData(
        name=str(raw["name"]),
        geometry_param=None if geometry is None else float(geometry),
        n_spatial=m,
        n_electrons=int(raw["n_electrons"]),
        core_energy=float(raw["core_energy"]),
        h1=block(raw["h1"], (m, m), "h1"),
        h2=block(raw["h2"], (m, m, m, m), "h2"),
        dipole_ints=dipole_ints,
        nuclear_dipole=nuclear,
        hf_energy=None if hf_energy is None else float(hf_energy),
        metadata=dict(raw.get("metadata", {})),
    )


def _parse_fcidump(text: str) -> MolecularData:
    lines = text.splitlines()
    header_lines = []
    body_start = None
    for i, line in enumerate(lines):
        header_lines.append(line)
        if "&END" in line.upper() or line.strip() == "/":
            body_start = i + 1
            break
    if body_start is None:
        raise SchemaError("FCIDUMP header not terminated by &END or /")
    header = " ".join(header_lines).replace(",", " , ")

    def field_value(name):
        import re

        match = re.search(rf"{name}\s*=\s*(-?\d+)", header, flags=re.IGNORECASE)
        if not match:
            raise SchemaError(f"FCIDUMP header missing {name}")
        return int(match.group(1))

    m = field_value("NORB")
    n_electrons = field_value("NELEC")
    if m < 1:
        raise SchemaError("NORB must be positive")
    h1 = np.zeros((m, m))
    chem = np.zeros((m, m, m, m))
    core = 0.0
    for line in lines[body_start:]:
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise SchemaError(f"malformed FCIDUMP record: {line.strip()!r}")
        value = float(parts[0])
        if not math.isfinite(value):
            raise SchemaError("non-finite FCIDUMP value")
        i, j, k, l = (int(p) for p in parts[1:])
        if i == j == k == l == 0:
            core = value
        elif k == l == 0:
            h1[i - 1, j - 1] = value
            h1[j - 1, i - 1] = value
        else:
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for (w, x, y, z) in (
                (a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a),
            ):
                chem[w, x, y, z] = value
    h2 = chem.transpose(0, 2, 1, 3).copy()  # (pr|qs) -> <pq|rs>
    return MolecularData(
        name="fcidump",
        geometry_param=None,
        n_spatial=m,
        n_electrons=n_electrons,
        core_energy=core,
        h1=h1,
        h2=h2,
    )


# ---------------------------------------------------------------------------
# Second-quantized assembly


def _spin_orbital_terms(m: MolecularData):
    """Yield (coeff, factors) over blocked spin orbitals for the Hamiltonian."""
    n = m.n_spatial
    h1, h2 = m.h1, m.h2
    for p in range(n):
        for q in range(n):
            c = h1[p, q]
            if abs(c) < 1e-12:
                continue
            for s in (0, n):
                yield c, ((s + p, True), (s + q, False))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s_ in range(n):
                    c = 0.5 * h2[p, q, r, s_]
                    if abs(c) < 1e-12:
                        continue
                    # spin of p matches r (electron 1), q matches s (electron 2)
                    for sp1 in (0, n):
                        for sp2 in (0, n):
                            yield c, (
                                (sp1 + p, True),
                                (sp2 + q, True),
                                (sp2 + s_, False),
                                (sp1 + r, False),
                            )


def hamiltonian_fermion_operator(m: MolecularData) -> FermionOperator:
    return FermionOperator(m.n_spin_orbitals, list(_spin_orbital_terms(m)))


def build_hamiltonian(m: MolecularData, mapping: Mapping) -> QubitOperator:
    """Map the active-space Hamiltonian to qubits; core energy rides the identity."""
    op = map_operator(hamiltonian_fermion_operator(m), mapping, m.n_electrons)
    return op + QubitOperator.identity(op.n_qubits, m.core_energy)


def dipole_fermion_operator(m: MolecularData, axis: int) -> FermionOperator:
    if m.dipole_ints is None:
        raise UnsupportedMetricError(
            "input carries no dipole integrals (FCIDUMP or reduced fixture)"
        )
    d = m.dipole_ints[axis]
    n = m.n_spatial
    terms = []
    for p in range(n):
        for q in range(n):
            c = -d[p, q]  # electronic charge is -1 in atomic units
            if abs(c) < 1e-12:
                continue
            for s in (0, n):
                terms.append((c, ((s + p, True), (s + q, False))))
    return FermionOperator(m.n_spin_orbitals, terms)


def build_dipole(m: MolecularData, mapping: Mapping, axis: int | str) -> QubitOperator:
    """One-electron dipole operator along an axis, in e*a0, mapped like the Hamiltonian."""
    if isinstance(axis, str):
        axis = AXES.index(axis)
    op = map_operator(dipole_fermion_operator(m, axis), mapping, m.n_electrons)
    return op + QubitOperator.identity(op.n_qubits, float(m.nuclear_dipole[axis]))


# ---------------------------------------------------------------------------
# Geometry series


@dataclass(frozen=True)
class GeometrySeries:
    """Ordered scan of one molecule with strictly increasing geometry parameter."""

    entries: tuple[MolecularData, ...]

    def __post_init__(self):
        if not self.entries:
            raise SchemaError("empty geometry series")
        first = self.entries[0]
        params = []
        for e in self.entries:
            if e.geometry_param is None:
                raise SchemaError("series entries need geometry_param_angstrom")
            if (e.name, e.n_spatial, e.n_electrons) != (
                first.name,
                first.n_spatial,
                first.n_electrons,
            ):
                raise SchemaError("series mixes molecules or orbital counts")
            params.append(e.geometry_param)
        if any(b <= a for a, b in zip(params, params[1:])):
            raise SchemaError("geometry parameters must be strictly increasing")

    @property
    def name(self) -> str:
        return self.entries[0].name

    @property
    def params(self) -> list[float]:
        return [e.geometry_param for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @classmethod
    def load(cls, directory: str | Path, pattern: str = "*.json") -> "GeometrySeries":
        paths = [p for p in sorted(Path(directory).glob(pattern)) if p.name != "manifest.json"]
        if not paths:
            raise SchemaError(f"no {pattern} fixtures under {directory}")
        entries = sorted(
            (load_moldata(p) for p in paths),
            key=lambda e: (e.geometry_param is None, e.geometry_param),
        )
        return cls(tuple(entries))

    def subsample(self, stride: int, keep_last: bool = True) -> "GeometrySeries":
        """Every stride-th point; optionally force-keep the last (4 A) point."""
        picked = list(self.entries[::stride])
        if keep_last and self.entries[-1] is not picked[-1]:
            picked.append(self.entries[-1])
        return GeometrySeries(tuple(picked))
