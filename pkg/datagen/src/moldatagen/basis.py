"""STO-3G basis set data and contracted-Gaussian bookkeeping.

Exponents/coefficients are the standard published STO-3G values. Only the
elements needed for the benchmark molecules are included. Primitives are
normalized individually and each contracted function is renormalized to
unit self-overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ANGSTROM_TO_BOHR = 1.8897259886

# element -> list of shells; "S" shells: (exponents, s_coeffs),
# "SP" shells: (exponents, s_coeffs, p_coeffs)
STO3G = {
    "H": [
        ("S", (3.425250914, 0.6239137298, 0.1688554040),
         (0.1543289673, 0.5353281423, 0.4446345422)),
    ],
    "Li": [
        ("S", (16.11957475, 2.936200663, 0.7946504870),
         (0.1543289673, 0.5353281423, 0.4446345422)),
        ("SP", (0.6362897469, 0.1478600533, 0.0480886784),
         (-0.09996722919, 0.3995128261, 0.7001154689),
         (0.1559162750, 0.6076837186, 0.3919573931)),
    ],
    "Be": [
        ("S", (30.16787069, 5.495115306, 1.487192653),
         (0.1543289673, 0.5353281423, 0.4446345422)),
        ("SP", (1.314833110, 0.3055389383, 0.0993707456),
         (-0.09996722919, 0.3995128261, 0.7001154689),
         (0.1559162750, 0.6076837186, 0.3919573931)),
    ],
    "O": [
        ("S", (130.7093214, 23.80886605, 6.443608313),
         (0.1543289673, 0.5353281423, 0.4446345422)),
        ("SP", (5.033151319, 1.169596125, 0.3803889600),
         (-0.09996722919, 0.3995128261, 0.7001154689),
         (0.1559162750, 0.6076837186, 0.3919573931)),
    ],
    "F": [
        ("S", (166.6791340, 30.36081233, 8.216820672),
         (0.1543289673, 0.5353281423, 0.4446345422)),
        ("SP", (6.464803249, 1.502281245, 0.4885884864),
         (-0.09996722919, 0.3995128261, 0.7001154689),
         (0.1559162750, 0.6076837186, 0.3919573931)),
    ],
}

NUCLEAR_CHARGE = {"H": 1, "Li": 3, "Be": 4, "O": 8, "F": 9}


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _primitive_norm(alpha: float, lmn: tuple[int, int, int]) -> float:
    l, m, n = lmn
    num = (2 * alpha / math.pi) ** 1.5 * (4 * alpha) ** (l + m + n)
    den = (
        _double_factorial(2 * l - 1)
        * _double_factorial(2 * m - 1)
        * _double_factorial(2 * n - 1)
    )
    return math.sqrt(num / den)


@dataclass
class BasisFunction:
    """Contracted Cartesian Gaussian: sum_k c_k N_k exp(-a_k |r-A|^2) x^l y^m z^n."""

    center: np.ndarray
    lmn: tuple[int, int, int]
    exponents: np.ndarray
    coefficients: np.ndarray  # includes primitive norms and contraction renorm

    @property
    def total_angular_momentum(self) -> int:
        return sum(self.lmn)


def _self_overlap(exps, coefs, lmn) -> float:
    from .integrals import primitive_overlap

    total = 0.0
    for a, ca in zip(exps, coefs):
        for b, cb in zip(exps, coefs):
            total += ca * cb * primitive_overlap(
                a, lmn, np.zeros(3), b, lmn, np.zeros(3)
            )
    return total


def make_basis_function(center, lmn, exps, raw_coefs) -> BasisFunction:
    exps = np.asarray(exps, dtype=float)
    coefs = np.array(
        [c * _primitive_norm(a, lmn) for a, c in zip(exps, raw_coefs)], dtype=float
    )
    coefs /= math.sqrt(_self_overlap(exps, coefs, lmn))
    return BasisFunction(np.asarray(center, dtype=float), lmn, exps, coefs)


def build_basis(symbols, coords_bohr) -> list[BasisFunction]:
    """AO list per atom, shell order s then (px, py, pz) for SP shells."""
    aos: list[BasisFunction] = []
    for sym, center in zip(symbols, coords_bohr):
        for shell in STO3G[sym]:
            if shell[0] == "S":
                _, exps, coefs = shell
                aos.append(make_basis_function(center, (0, 0, 0), exps, coefs))
            else:
                _, exps, s_coefs, p_coefs = shell
                aos.append(make_basis_function(center, (0, 0, 0), exps, s_coefs))
                for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    aos.append(make_basis_function(center, lmn, exps, p_coefs))
    return aos
