"""Pauli-string algebra and qubit-operator arithmetic.

Strings are stored symplectically as two integer bitmasks (x, z), bit q of
each mask belonging to qubit q:

    (x=0, z=0) -> I     (x=1, z=0) -> X
    (x=1, z=1) -> Y     (x=0, z=1) -> Z

Products therefore cost O(n/word). The sign bookkeeping uses the standard
decomposition P = i^{|x & z|} X^x Z^z.

Conventions fixed here and used everywhere else:
  * text rendering is qubit-0-leftmost (``IXZ`` puts X on qubit 1);
  * dense matrices are little-endian in qubit number: basis index
    b = sum_q bit_q 2^q, i.e. matrix = kron(P_{n-1}, ..., P_0);
  * term iteration order is lexicographic on the (x, z) bitmask pair, so
    serialization and arithmetic are reproducible run to run.

Operators are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import DimensionError, DomainError, ResourceLimitError

COEFF_PRUNE_EPS = 1e-12
MATRIX_QUBIT_GUARD = 14

_AXIS_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_AXIS = {v: k for k, v in _AXIS_TO_XZ.items()}

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """Fixed-length Pauli word; one axis per qubit, qubit 0 leftmost in text."""

    n: int
    x: int
    z: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("qubit count must be non-negative")
        top = 1 << self.n
        if self.x >= top or self.z >= top or self.x < 0 or self.z < 0:
            raise DimensionError("bitmask exceeds declared qubit count")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        x = z = 0
        for q, ch in enumerate(label):
            try:
                xq, zq = _AXIS_TO_XZ[ch]
            except KeyError:
                raise DomainError(f"invalid Pauli axis {ch!r} in {label!r}") from None
            x |= xq << q
            z |= zq << q
        return cls(len(label), x, z)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    def axis(self, q: int) -> str:
        return _XZ_TO_AXIS[((self.x >> q) & 1, (self.z >> q) & 1)]

    def label(self) -> str:
        return "".join(self.axis(q) for q in range(self.n))

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def support(self) -> int:
        """Bitmask of qubits acted on non-trivially."""
        return self.x | self.z

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def to_matrix(self) -> np.ndarray:
        if self.n > MATRIX_QUBIT_GUARD:
            raise ResourceLimitError(f"dense matrix limited to {MATRIX_QUBIT_GUARD} qubits")
        m = np.eye(1, dtype=complex)
        for q in range(self.n - 1, -1, -1):
            m = np.kron(m, _PAULI_MATRICES[self.axis(q)])
        return m

    def __str__(self) -> str:
        return self.label()


def pauli_product(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Multiply two Pauli strings: matrix(a) @ matrix(b) = phase * matrix(result).

    The phase is one of {1, i, -1, -i}, exact.
    """
    if a.n != b.n:
        raise DimensionError(f"length mismatch: {a.n} vs {b.n}")
    x3 = a.x ^ b.x
    z3 = a.z ^ b.z
    # i-exponent from rewriting (i^{|y_a|} X Z)(i^{|y_b|} X Z) in standard form.
    k = (a.x & a.z).bit_count() + (b.x & b.z).bit_count() - (x3 & z3).bit_count()
    k += 2 * (a.z & b.x).bit_count()
    return 1j ** (k % 4), PauliString(a.n, x3, z3)


class QubitOperator:
    """Weighted sum of Pauli strings on a fixed qubit register.

    Coefficients are complex; an operator is Hermitian iff all of them are
    real (up to tolerance). Terms with |coefficient| < 1e-12 are pruned on
    construction. Instances are immutable.
    """

    __slots__ = ("n_qubits", "_terms", "_hash")

    def __init__(self, n_qubits: int, terms: Mapping[tuple[int, int], complex] | None = None):
        if n_qubits < 0:
            raise DomainError("qubit count must be non-negative")
        self.n_qubits = n_qubits
        top = 1 << n_qubits
        kept: dict[tuple[int, int], complex] = {}
        if terms:
            for (x, z), c in terms.items():
                if x >= top or z >= top:
                    raise DimensionError("term exceeds declared qubit count")
                c = complex(c)
                if abs(c) >= COEFF_PRUNE_EPS:
                    kept[(x, z)] = c
        object.__setattr__(self, "_terms", dict(sorted(kept.items())))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        if name in ("n_qubits", "_terms", "_hash") and not hasattr(self, "_terms"):
            object.__setattr__(self, name, value)
        elif name == "_hash":
            object.__setattr__(self, name, value)
        else:
            raise AttributeError("QubitOperator is immutable")

    def __reduce__(self):
        return (QubitOperator, (self.n_qubits, dict(self._terms)))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, n_qubits: int) -> "QubitOperator":
        return cls(n_qubits, {})

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "QubitOperator":
        return cls(n_qubits, {(0, 0): coeff})

    @classmethod
    def from_term(cls, string: PauliString, coeff: complex = 1.0) -> "QubitOperator":
        return cls(string.n, {(string.x, string.z): coeff})

    @classmethod
    def from_labels(cls, n_qubits: int, terms: Mapping[str, complex]) -> "QubitOperator":
        out: dict[tuple[int, int], complex] = {}
        for label, c in terms.items():
            if len(label) != n_qubits:
                raise DimensionError(f"label {label!r} has wrong length")
            s = PauliString.from_label(label)
            out[(s.x, s.z)] = out.get((s.x, s.z), 0.0) + c
        return cls(n_qubits, out)

    # -- inspection ------------------------------------------------------------

    def terms(self) -> Iterator[tuple[PauliString, complex]]:
        """Yield (string, coefficient) in lexicographic bitmask order."""
        for (x, z), c in self._terms.items():
            yield PauliString(self.n_qubits, x, z), c

    def raw_terms(self) -> Mapping[tuple[int, int], complex]:
        return self._terms

    def coefficient(self, string: PauliString) -> complex:
        return self._terms.get((string.x, string.z), 0.0 + 0.0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QubitOperator):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_qubits, tuple(self._terms.items())))
        return self._hash

    @property
    def identity_coefficient(self) -> complex:
        return self._terms.get((0, 0), 0.0 + 0.0j)

    def max_imag(self) -> float:
        return max((abs(c.imag) for c in self._terms.values()), default=0.0)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return self.max_imag() <= tol

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "QubitOperator") -> "QubitOperator":
        if not isinstance(other, QubitOperator):
            return NotImplemented
        if self.n_qubits != other.n_qubits:
            raise DimensionError("mixed qubit counts in operator sum")
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0.0) + c
        return QubitOperator(self.n_qubits, out)

    def __sub__(self, other: "QubitOperator") -> "QubitOperator":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, QubitOperator):
            if self.n_qubits != other.n_qubits:
                raise DimensionError("mixed qubit counts in operator product")
            out: dict[tuple[int, int], complex] = {}
            for (xa, za), ca in self._terms.items():
                ya = (xa & za).bit_count()
                for (xb, zb), cb in other._terms.items():
                    x3, z3 = xa ^ xb, za ^ zb
                    k = ya + (xb & zb).bit_count() - (x3 & z3).bit_count()
                    k += 2 * (za & xb).bit_count()
                    key = (x3, z3)
                    out[key] = out.get(key, 0.0) + ca * cb * (1j ** (k % 4))
            return QubitOperator(self.n_qubits, out)
        return QubitOperator(
            self.n_qubits, {k: c * other for k, c in self._terms.items()}
        )

    def __rmul__(self, other) -> "QubitOperator":
        return self.__mul__(other)

    def dagger(self) -> "QubitOperator":
        return QubitOperator(
            self.n_qubits, {k: c.conjugate() for k, c in self._terms.items()}
        )

    # -- dense oracle ------------------------------------------------------------

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; the oracle backend for exact diagonalization."""
        if self.n_qubits > MATRIX_QUBIT_GUARD:
            raise ResourceLimitError(
                f"op_to_matrix limited to {MATRIX_QUBIT_GUARD} qubits, got {self.n_qubits}"
            )
        dim = 1 << self.n_qubits
        m = np.zeros((dim, dim), dtype=complex)
        for string, c in self.terms():
            m += c * string.to_matrix()
        return m

    # -- text serialization --------------------------------------------------

    def to_text(self) -> str:
        """One term per line: `<coeff_re> <coeff_im> <IXYZ string>`, qubit 0 leftmost."""
        lines = []
        for string, c in self.terms():
            lines.append(f"{c.real!r} {c.imag!r} {string.label()}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "QubitOperator":
        terms: dict[tuple[int, int], complex] = {}
        n = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            re_s, im_s, label = line.split()
            if n is None:
                n = len(label)
            elif len(label) != n:
                raise DimensionError("inconsistent string lengths in operator text")
            s = PauliString.from_label(label)
            terms[(s.x, s.z)] = terms.get((s.x, s.z), 0.0) + complex(float(re_s), float(im_s))
        if n is None:
            raise DomainError("empty operator text")
        return cls(n, terms)

    def __repr__(self) -> str:
        inner = " + ".join(f"({c:.6g})*{s}" for s, c in list(self.terms())[:4])
        more = "" if len(self) <= 4 else f" + {len(self) - 4} more"
        return f"QubitOperator({self.n_qubits} qubits: {inner}{more})"


def op_sum(parts: Iterable[QubitOperator]) -> QubitOperator:
    """Sum operators sharing a register; identical strings collected, near-zeros pruned."""
    parts = list(parts)
    if not parts:
        raise DomainError("op_sum of an empty list has no register size")
    n = parts[0].n_qubits
    out: dict[tuple[int, int], complex] = {}
    for p in parts:
        if p.n_qubits != n:
            raise DimensionError("mixed qubit counts in op_sum")
        for key, c in p.raw_terms().items():
            out[key] = out.get(key, 0.0) + c
    return QubitOperator(n, out)


def op_to_matrix(op: QubitOperator) -> np.ndarray:
    return op.to_matrix()
