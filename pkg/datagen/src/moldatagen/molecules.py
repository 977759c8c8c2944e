"""Benchmark molecules: geometries, active spaces, default scan grids.

Triatomics stretch along the totally symmetric mode (all bonds scaled
together); the H2O bond angle is fixed at the conventional 104.5 degrees
and recorded in metadata as an assumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import ANGSTROM_TO_BOHR

H2O_ANGLE_DEG = 104.5


@dataclass(frozen=True)
class MoleculeSpec:
    name: str
    symbols: tuple[str, ...]
    n_frozen: int
    n_active: int
    default_grid: tuple[float, ...]

    def geometry_bohr(self, r_angstrom: float) -> np.ndarray:
        r = r_angstrom * ANGSTROM_TO_BOHR
        if self.name == "H2":
            coords = [(0.0, 0.0, -r / 2), (0.0, 0.0, r / 2)]
        elif self.name in ("LiH", "HF"):
            coords = [(0.0, 0.0, 0.0), (0.0, 0.0, r)]
        elif self.name == "BeH2":
            coords = [(0.0, 0.0, 0.0), (0.0, 0.0, -r), (0.0, 0.0, r)]
        elif self.name == "H2O":
            half = math.radians(H2O_ANGLE_DEG) / 2
            coords = [
                (0.0, 0.0, 0.0),
                (r * math.sin(half), 0.0, r * math.cos(half)),
                (-r * math.sin(half), 0.0, r * math.cos(half)),
            ]
        else:
            raise ValueError(f"unknown molecule {self.name}")
        return np.asarray(coords)


def _uniform(start, stop, count):
    return tuple(float(x) for x in np.linspace(start, stop, count))


MOLECULES = {
    "H2": MoleculeSpec("H2", ("H", "H"), 0, 2, _uniform(0.1, 4.0, 40)),
    "LiH": MoleculeSpec("LiH", ("Li", "H"), 0, 3, _uniform(0.1, 4.0, 40)),
    "BeH2": MoleculeSpec("BeH2", ("Be", "H", "H"), 1, 4, (0.9, 1.35, 1.8, 2.6, 4.0)),
    "H2O": MoleculeSpec("H2O", ("O", "H", "H"), 2, 5, (0.75, 0.96, 1.15, 2.0, 4.0)),
    "HF": MoleculeSpec("HF", ("F", "H"), 0, 6, (0.85, 0.95, 1.3, 2.2, 4.0)),
}


def molecule_spec(name: str) -> MoleculeSpec:
    for key, spec in MOLECULES.items():
        if key.lower() == name.lower():
            return spec
    raise ValueError(f"unknown molecule {name!r}; choose from {sorted(MOLECULES)}")
