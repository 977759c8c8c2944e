"""Occupation-number states, ladder operators, and fermion-to-qubit mappings.

Spin orbitals use blocked ordering throughout: modes 0..M-1 are spin-up,
modes M..2M-1 spin-down. Occupation bit p of a basis index is bit p
(little-endian), matching the qubit convention in :mod:`vqebench.pauli`.

Mappings:
  * Jordan-Wigner:  a_i^dag -> 1/2 (X_i - iY_i) (x) Z_{j<i}
  * Parity:         qubit j stores the running parity of modes 0..j; the
    blocked ordering makes qubit M-1 carry the spin-up parity and qubit
    2M-1 the total parity, both conserved for the operators used here.
  * Parity + two-qubit reduction: qubits M-1 and 2M-1 are removed and
    replaced by their symmetry eigenvalues (-1)^{n_alpha}, (-1)^{n_e}.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DimensionError, DomainError, SymmetryError
from .pauli import QubitOperator, op_sum


class Mapping(enum.Enum):
    JW = "jw"
    PARITY = "parity"
    PARITY_REDUCED = "parity-reduced"

    @classmethod
    def from_name(cls, name: str) -> "Mapping":
        for m in cls:
            if m.value == name or m.name.lower() == name.lower():
                return m
        raise DomainError(f"unknown mapping {name!r}")


@dataclass(frozen=True)
class OccupationState:
    """Occupancies k_p, one per spin orbital; bit p of `index` is mode p."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise DomainError("occupancies must be 0 or 1")

    @classmethod
    def from_index(cls, n_modes: int, index: int) -> "OccupationState":
        return cls(tuple((index >> p) & 1 for p in range(n_modes)))

    @property
    def n_modes(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        return sum(b << p for p, b in enumerate(self.bits))

    @property
    def electron_count(self) -> int:
        return sum(self.bits)

    def label(self) -> str:
        """Mode-0-leftmost rendering, e.g. |1010>."""
        return "|" + "".join(str(b) for b in self.bits) + ">"


class FermionOperator:
    """Sum of ladder-operator products: terms are (coeff, ((mode, dagger), ...))."""

    __slots__ = ("n_modes", "terms")

    def __init__(self, n_modes: int, terms=()):
        self.n_modes = n_modes
        normalized = []
        for coeff, factors in terms:
            factors = tuple((int(m), bool(d)) for m, d in factors)
            for mode, _ in factors:
                if not 0 <= mode < n_modes:
                    raise DimensionError(f"mode {mode} outside 0..{n_modes - 1}")
            if coeff != 0:
                normalized.append((complex(coeff), factors))
        self.terms = tuple(normalized)

    @classmethod
    def ladder(cls, n_modes: int, factors, coeff: complex = 1.0) -> "FermionOperator":
        return cls(n_modes, [(coeff, tuple(factors))])

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        if self.n_modes != other.n_modes:
            raise DimensionError("mixed mode counts")
        return FermionOperator(self.n_modes, self.terms + other.terms)

    def __mul__(self, scalar) -> "FermionOperator":
        return FermionOperator(
            self.n_modes, [(c * scalar, f) for c, f in self.terms]
        )

    def dagger(self) -> "FermionOperator":
        out = []
        for c, factors in self.terms:
            out.append(
                (c.conjugate(), tuple((m, not d) for m, d in reversed(factors)))
            )
        return FermionOperator(self.n_modes, out)

    def __repr__(self) -> str:
        def fmt(f):
            return " ".join(f"a{'+' if d else ''}_{m}" for m, d in f)

        inner = " + ".join(f"({c:.4g})*{fmt(f)}" for c, f in self.terms[:3])
        more = "" if len(self.terms) <= 3 else f" + {len(self.terms) - 3} more"
        return f"FermionOperator({self.n_modes} modes: {inner}{more})"


def apply_ladder_product(factors, state: OccupationState):
    """Apply a ladder-operator product right-to-left to an occupation state.

    Returns (phase, state) with phase in {+1, -1} on success, or (0, None)
    when a factor annihilates an empty orbital / creates a filled one. The
    phase accumulates Gamma^k_p = (-1)^(sum_{m<p} k_m) per factor.
    """
    bits = list(state.bits)
    phase = 1
    for mode, dagger in reversed(factors):
        occupied = bits[mode]
        if dagger == bool(occupied):
            return 0, None
        if sum(bits[:mode]) % 2:
            phase = -phase
        bits[mode] = 1 - occupied
    return phase, OccupationState(tuple(bits))


def _jw_ladder(n_modes: int, mode: int, dagger: bool) -> QubitOperator:
    chain = (1 << mode) - 1  # Z on every mode below
    x_term = (1 << mode, chain | 0)
    y_term = (1 << mode, chain | (1 << mode))
    sign = -1j if dagger else 1j
    return QubitOperator(n_modes, {x_term: 0.5, y_term: 0.5 * sign})


def _parity_ladder(n_modes: int, mode: int, dagger: bool) -> QubitOperator:
    x_chain = ((1 << n_modes) - 1) ^ ((1 << (mode + 1)) - 1)  # X on modes above
    z_below = (1 << (mode - 1)) if mode > 0 else 0
    first = (x_chain | (1 << mode), z_below)  # Z_{j-1} X_j X_chain
    second = (x_chain | (1 << mode), 1 << mode)  # Y_j X_chain
    sign = -1j if dagger else 1j
    return QubitOperator(n_modes, {first: 0.5, second: 0.5 * sign})


def _map_terms(f: FermionOperator, ladder_fn) -> QubitOperator:
    parts = []
    for coeff, factors in f.terms:
        term_op = QubitOperator.identity(f.n_modes, coeff)
        for mode, dagger in factors:
            term_op = term_op * ladder_fn(f.n_modes, mode, dagger)
        parts.append(term_op)
    if not parts:
        return QubitOperator.zero(f.n_modes)
    return op_sum(parts)


def jordan_wigner(f: FermionOperator) -> QubitOperator:
    """Jordan-Wigner transform; output acts on n_modes qubits."""
    if f.n_modes < 1:
        raise DomainError("need at least one mode")
    return _map_terms(f, _jw_ladder)


def parity_map(f: FermionOperator) -> QubitOperator:
    """Parity-basis transform without symmetry reduction (n_modes qubits)."""
    if f.n_modes < 1:
        raise DomainError("need at least one mode")
    return _map_terms(f, _parity_ladder)


def _drop_bits(mask: int, positions: tuple[int, int]) -> int:
    out = 0
    shift = 0
    for q in range(64):
        if q in positions:
            continue
        out |= ((mask >> q) & 1) << shift
        shift += 1
    return out


def parity_map_reduced(f: FermionOperator, n_electrons: int) -> QubitOperator:
    """Parity transform followed by removal of the two symmetry qubits.

    Requires blocked spin ordering and an even mode count. Spin-up count is
    the aufbau split ceil(n_electrons / 2). Output acts on n_modes - 2
    qubits; terms carrying X or Y on a symmetry qubit raise SymmetryError.
    """
    n = f.n_modes
    if n % 2:
        raise SymmetryError("parity reduction needs an even spin-orbital count")
    n_alpha = (n_electrons + 1) // 2
    mid, last = n // 2 - 1, n - 1
    z_mid = (-1) ** n_alpha
    z_last = (-1) ** n_electrons
    full = parity_map(f)
    reduced: dict[tuple[int, int], complex] = {}
    for (x, z), c in full.raw_terms().items():
        if (x >> mid) & 1 or (x >> last) & 1:
            raise SymmetryError(
                "operator does not commute with the removed Z2 symmetries"
            )
        if (z >> mid) & 1:
            c = c * z_mid
        if (z >> last) & 1:
            c = c * z_last
        key = (_drop_bits(x, (mid, last)), _drop_bits(z, (mid, last)))
        reduced[key] = reduced.get(key, 0.0) + c
    return QubitOperator(n - 2, reduced)


def map_operator(f: FermionOperator, mapping: Mapping, n_electrons: int | None = None) -> QubitOperator:
    if mapping is Mapping.JW:
        return jordan_wigner(f)
    if mapping is Mapping.PARITY:
        return parity_map(f)
    if mapping is Mapping.PARITY_REDUCED:
        if n_electrons is None:
            raise DomainError("parity reduction needs the electron count")
        return parity_map_reduced(f, n_electrons)
    raise DomainError(f"unknown mapping {mapping}")


def hf_occupation(n_modes: int, n_electrons: int) -> OccupationState:
    """Aufbau filling over the blocked active space (alpha gets the odd electron)."""
    if n_electrons > n_modes:
        raise DomainError("more electrons than spin orbitals")
    if n_modes % 2:
        raise DomainError("blocked ordering needs an even spin-orbital count")
    half = n_modes // 2
    n_alpha = (n_electrons + 1) // 2
    n_beta = n_electrons - n_alpha
    if n_alpha > half or n_beta > half:
        raise DomainError("electron count incompatible with blocked filling")
    bits = [0] * n_modes
    for p in range(n_alpha):
        bits[p] = 1
    for p in range(n_beta):
        bits[half + p] = 1
    return OccupationState(tuple(bits))


def _parity_bits(bits: tuple[int, ...]) -> list[int]:
    out = []
    acc = 0
    for b in bits:
        acc ^= b
        out.append(acc)
    return out


def hf_reference(n_modes: int, n_electrons: int, mapping: Mapping) -> int:
    """Computational-basis index of the Hartree-Fock state in the mapping's basis."""
    occ = hf_occupation(n_modes, n_electrons)
    if mapping is Mapping.JW:
        return occ.index
    pbits = _parity_bits(occ.bits)
    if mapping is Mapping.PARITY:
        return sum(b << q for q, b in enumerate(pbits))
    if mapping is Mapping.PARITY_REDUCED:
        mid, last = n_modes // 2 - 1, n_modes - 1
        kept = [b for q, b in enumerate(pbits) if q not in (mid, last)]
        return sum(b << q for q, b in enumerate(kept))
    raise DomainError(f"unknown mapping {mapping}")


def number_operator(n_modes: int) -> FermionOperator:
    return FermionOperator(
        n_modes, [(1.0, ((p, True), (p, False))) for p in range(n_modes)]
    )


def occupation_to_mapped_index(bits: tuple[int, ...], mapping: Mapping) -> int:
    """Basis index of a given occupation in the mapping's computational basis."""
    n = len(bits)
    if mapping is Mapping.JW:
        return sum(b << q for q, b in enumerate(bits))
    pbits = _parity_bits(tuple(bits))
    if mapping is Mapping.PARITY:
        return sum(b << q for q, b in enumerate(pbits))
    if mapping is Mapping.PARITY_REDUCED:
        mid, last = n // 2 - 1, n - 1
        kept = [b for q, b in enumerate(pbits) if q not in (mid, last)]
        return sum(b << q for q, b in enumerate(kept))
    raise DomainError(f"unknown mapping {mapping}")
