"""Shared fixtures: bundled molecular data lives at the repo root."""

from pathlib import Path

import pytest

from vqebench.moldata import GeometrySeries, load_moldata

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def fixture_path(molecule: str) -> Path:
    return DATA_DIR / molecule.lower()


@pytest.fixture(scope="session")
def h2_series() -> GeometrySeries:
    return GeometrySeries.load(fixture_path("h2"))


@pytest.fixture(scope="session")
def lih_series() -> GeometrySeries:
    return GeometrySeries.load(fixture_path("lih"))


@pytest.fixture(scope="session")
def h2_fixture(h2_series):
    """The grid point closest to the H2 equilibrium separation."""
    return min(h2_series, key=lambda m: abs(m.geometry_param - 0.7))


@pytest.fixture(scope="session")
def lih_fixture(lih_series):
    return min(lih_series, key=lambda m: abs(m.geometry_param - 1.6))
