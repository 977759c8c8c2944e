"""Circuit execution: ideal statevector, shot sampling, and noisy sampling.

Statevector indices are little-endian in qubit number (bit q of the basis
index is qubit q), matching the bitmask convention of :mod:`vqebench.pauli`.

Noise model: after every primitive 1-qubit (2-qubit) gate, with probability
p1 (p2) a uniformly random Pauli from the 4 (16) element set including the
identity is inserted on the gate's qubits; readout flips each measured bit
with its configured asymmetric probabilities. Two equivalent realizations
are provided:

  * n_qubits <= 5: exact channel evolution of the density matrix followed
    by multinomial outcome sampling (same distribution, much faster);
  * n_qubits  > 5: per-shot stochastic Pauli insertion (trajectories),
    vectorized over shots.

PauliRotation gates are applied in closed form on the ideal path and
compiled to basis changes + CNOT ladder + RZ for the sampled paths, so
per-gate noise sees the realistic gate count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, SchemaError
from .pauli import PauliString, QubitOperator

_H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)

ROTATION_KINDS = ("rx", "ry", "rz", "prot")


def _rotation_matrix(kind: str, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    if kind == "rx":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "ry":
        return np.array([[c, -s], [s, c]])
    if kind == "rz":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    raise DomainError(f"not a single-qubit rotation: {kind}")


@dataclass(frozen=True)
class Gate:
    """One circuit instruction.

    Parameterized gates reference a slot of the parameter vector and carry a
    linear prefactor: effective angle = prefactor * params[slot]. Fixed
    gates store the angle directly (slot None).
    """

    kind: str
    qubits: tuple[int, ...]
    slot: int | None = None
    prefactor: float = 1.0
    angle: float = 0.0
    pauli: PauliString | None = None

    def resolve_angle(self, params: np.ndarray) -> float:
        if self.slot is None:
            return self.angle
        return self.prefactor * float(params[self.slot])

    @property
    def is_parameterized(self) -> bool:
        return self.slot is not None


class Circuit:
    """Ordered gate program on a fixed register with a parameter vector."""

    def __init__(self, n_qubits: int, n_params: int = 0):
        if n_qubits < 1:
            raise DomainError("need at least one qubit")
        self.n_qubits = n_qubits
        self.n_params = n_params
        self.gates: list[Gate] = []

    def _check_qubits(self, qubits):
        for q in qubits:
            if not 0 <= q < self.n_qubits:
                raise DimensionError(f"qubit {q} outside register of {self.n_qubits}")

    def _check_slot(self, slot):
        if slot is not None and not 0 <= slot < self.n_params:
            raise DimensionError(f"parameter slot {slot} outside vector of {self.n_params}")

    def add(self, gate: Gate) -> "Circuit":
        self._check_qubits(gate.qubits)
        self._check_slot(gate.slot)
        self.gates.append(gate)
        return self

    def h(self, q: int):
        return self.add(Gate("h", (q,)))

    def x(self, q: int):
        return self.add(Gate("x", (q,)))

    def rx(self, q: int, slot=None, prefactor=1.0, angle=0.0):
        return self.add(Gate("rx", (q,), slot, prefactor, angle))

    def ry(self, q: int, slot=None, prefactor=1.0, angle=0.0):
        return self.add(Gate("ry", (q,), slot, prefactor, angle))

    def rz(self, q: int, slot=None, prefactor=1.0, angle=0.0):
        return self.add(Gate("rz", (q,), slot, prefactor, angle))

    def cnot(self, control: int, target: int):
        if control == target:
            raise DimensionError("control equals target")
        return self.add(Gate("cnot", (control, target)))

    def cz(self, a: int, b: int):
        if a == b:
            raise DimensionError("cz qubits coincide")
        return self.add(Gate("cz", (a, b)))

    def pauli_rotation(self, pauli: PauliString, slot=None, prefactor=1.0, angle=0.0):
        if pauli.n != self.n_qubits:
            raise DimensionError("PauliRotation string length mismatch")
        if pauli.is_identity:
            raise DomainError("PauliRotation on the identity string")
        return self.add(Gate("prot", tuple(), slot, prefactor, angle, pauli))

    def parameterized_gates(self):
        return [(i, g) for i, g in enumerate(self.gates) if g.is_parameterized]

    def compiled_primitives(self) -> "Circuit":
        """Expand PauliRotations into basis changes + CNOT ladder + RZ.

        Used by the sampled paths so per-gate noise sees real gate counts.
        Parameter slots and prefactors are preserved on the RZ carrying the
        rotation, so shift rules keep working on the compiled form.
        """
        cached = getattr(self, "_primitives", None)
        if cached is not None:
            return cached
        out = Circuit(self.n_qubits, self.n_params)
        for g in self.gates:
            if g.kind != "prot":
                out.add(g)
                continue
            support = [q for q in range(self.n_qubits) if (g.pauli.support >> q) & 1]
            pre: list[Gate] = []
            post: list[Gate] = []
            for q in support:
                axis = g.pauli.axis(q)
                if axis == "X":
                    pre.append(Gate("h", (q,)))
                    post.append(Gate("h", (q,)))
                elif axis == "Y":
                    # Sdag;H maps the Y eigenbasis to Z; inverse is H;S
                    pre.extend([Gate("rz", (q,), angle=-math.pi / 2), Gate("h", (q,))])
                    post.extend([Gate("h", (q,)), Gate("rz", (q,), angle=math.pi / 2)])
            for gate in pre:
                out.add(gate)
            for a, b in zip(support, support[1:]):
                out.cnot(a, b)
            target = support[-1]
            out.add(Gate("rz", (target,), g.slot, g.prefactor, g.angle))
            for a, b in reversed(list(zip(support, support[1:]))):
                out.cnot(a, b)
            for gate in post:
                out.add(gate)
        self._primitives = out
        return out

    # -- static per-gate data reused across evaluations ----------------------

    def _static(self, i: int, gate: Gate):
        cache = getattr(self, "_static_cache", None)
        if cache is None:
            cache = {}
            self._static_cache = cache
        if i not in cache:
            dim = 1 << self.n_qubits
            idx = np.arange(dim)
            if gate.kind == "x":
                cache[i] = idx ^ (1 << gate.qubits[0])
            elif gate.kind == "cnot":
                c, t = gate.qubits
                cache[i] = np.where((idx >> c) & 1 == 1, idx ^ (1 << t), idx)
            elif gate.kind == "cz":
                a, b = gate.qubits
                both = ((idx >> a) & 1) & ((idx >> b) & 1)
                cache[i] = 1.0 - 2.0 * both
            elif gate.kind == "prot":
                perm = idx ^ gate.pauli.x
                phase = pauli_phase_vector(gate.pauli)
                cache[i] = (perm, phase[perm])
            else:
                cache[i] = None
        return cache[i]


def pauli_phase_vector(p: PauliString) -> np.ndarray:
    """phase(b) with P|b> = phase(b)|b ^ x_mask>, for all basis states b."""
    dim = 1 << p.n
    idx = np.arange(dim)
    n_y = (p.x & p.z).bit_count()
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & p.z) & 1)
    return (1j**n_y) * signs


def _apply_1q(state: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    view = state.reshape(-1, 2, 1 << q)
    v0, v1 = view[:, 0, :], view[:, 1, :]
    out = np.empty_like(view)
    out[:, 0, :] = u[0, 0] * v0 + u[0, 1] * v1
    out[:, 1, :] = u[1, 0] * v0 + u[1, 1] * v1
    return out.reshape(-1)


def _apply_gate(state: np.ndarray, circuit: Circuit, i: int, gate: Gate,
                params: np.ndarray, shift: tuple[int, float] | None) -> np.ndarray:
    kind = gate.kind
    if kind == "h":
        return _apply_1q(state, _H_MATRIX, gate.qubits[0])
    if kind == "x":
        return state[circuit._static(i, gate)]
    if kind in ("rx", "ry", "rz"):
        angle = gate.resolve_angle(params)
        if shift is not None and shift[0] == i:
            angle += shift[1]
        return _apply_1q(state, _rotation_matrix(kind, angle), gate.qubits[0])
    if kind == "cnot":
        return state[circuit._static(i, gate)]
    if kind == "cz":
        return state * circuit._static(i, gate)
    if kind == "prot":
        angle = gate.resolve_angle(params)
        if shift is not None and shift[0] == i:
            angle += shift[1]
        perm, phase = circuit._static(i, gate)
        return math.cos(angle / 2) * state - 1j * math.sin(angle / 2) * (phase * state[perm])
    raise DomainError(f"unknown gate kind {kind!r}")


def run_statevector(circuit: Circuit, params=None, initial_index: int = 0,
                    shift: tuple[int, float] | None = None) -> np.ndarray:
    """Apply the circuit to a basis state (default |0...0>) and return amplitudes.

    `shift` offsets the angle of one gate instance by a fixed amount; it is
    the sub-gate hook used by the exact parameter-shift rule.
    """
    params = np.zeros(circuit.n_params) if params is None else np.asarray(params, dtype=float)
    if params.shape != (circuit.n_params,):
        raise DimensionError(
            f"parameter vector of length {params.size} for circuit with {circuit.n_params} slots"
        )
    dim = 1 << circuit.n_qubits
    if not 0 <= initial_index < dim:
        raise DimensionError("initial basis index out of range")
    state = np.zeros(dim, dtype=complex)
    state[initial_index] = 1.0
    for i, gate in enumerate(circuit.gates):
        state = _apply_gate(state, circuit, i, gate, params, shift)
    return state


def expectation_exact(state: np.ndarray, op: QubitOperator) -> float:
    """Term-wise <s|op|s> without materializing the dense matrix."""
    state = np.asarray(state)
    if state.shape != (1 << op.n_qubits,):
        raise DimensionError("statevector dimension does not match operator")
    if not op.is_hermitian():
        raise DomainError("expectation of a non-Hermitian operator")
    total = 0.0 + 0.0j
    conj = state.conj()
    for string, c in op.terms():
        if string.is_identity:
            total += c
            continue
        perm = np.arange(state.size) ^ string.x
        phase = pauli_phase_vector(string)
        total += c * np.dot(conj, phase[perm] * state[perm])
    return float(total.real)


# ---------------------------------------------------------------------------
# Noise profile


@dataclass(frozen=True)
class NoiseProfile:
    """Depolarizing strengths per gate arity plus per-qubit readout flips."""

    p1: float = 0.0
    p2: float = 0.0
    readout: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        probs = [self.p1, self.p2] + [p for pair in self.readout for p in pair]
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise DomainError("noise probabilities must lie in [0, 1]")

    def readout_pair(self, q: int) -> tuple[float, float]:
        if not self.readout:
            return (0.0, 0.0)
        if len(self.readout) == 1:
            return self.readout[0]
        if q >= len(self.readout):
            raise DimensionError(f"no readout entry for qubit {q}")
        return self.readout[q]

    @property
    def trivial(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and all(
            a == 0.0 and b == 0.0 for a, b in self.readout
        )

    @classmethod
    def from_json(cls, text: str) -> "NoiseProfile":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid noise profile JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise SchemaError("noise profile must be a JSON object")
        unknown = set(raw) - {"p1", "p2", "readout"}
        if unknown:
            raise SchemaError(f"unknown noise profile keys: {sorted(unknown)}")
        readout = tuple(tuple(map(float, pair)) for pair in raw.get("readout", []))
        return cls(float(raw.get("p1", 0.0)), float(raw.get("p2", 0.0)), readout)

    def to_json(self) -> str:
        return json.dumps(
            {"p1": self.p1, "p2": self.p2, "readout": [list(r) for r in self.readout]}
        )


# ---------------------------------------------------------------------------
# Sampled estimation


def _measurement_circuit(circuit: Circuit, string: PauliString) -> Circuit:
    """Compiled circuit plus basis changes mapping the term to a Z-parity readout."""
    out = Circuit(circuit.n_qubits, circuit.n_params)
    for g in circuit.compiled_primitives().gates:
        out.add(g)
    for q in range(circuit.n_qubits):
        axis = string.axis(q)
        if axis == "X":
            out.h(q)
        elif axis == "Y":
            # S^dag then H sends the Y eigenbasis to the Z basis
            out.add(Gate("rz", (q,), angle=-math.pi / 2))
            out.h(q)
    return out


def _parity_values(n_qubits: int, support: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits)
    return 1.0 - 2.0 * (np.bitwise_count(idx & support) & 1)


def _apply_readout_to_probs(probs: np.ndarray, noise: NoiseProfile, n_qubits: int,
                            support: int) -> np.ndarray:
    for q in range(n_qubits):
        if not (support >> q) & 1:
            continue
        p10, p01 = noise.readout_pair(q)
        if p10 == 0.0 and p01 == 0.0:
            continue
        view = probs.reshape(-1, 2, 1 << q)
        v0, v1 = view[:, 0, :].copy(), view[:, 1, :].copy()
        view[:, 0, :] = (1 - p10) * v0 + p01 * v1
        view[:, 1, :] = p10 * v0 + (1 - p01) * v1
    return probs


def _mean_stderr_from_counts(counts: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    shots = int(counts.sum())
    mean = float(np.dot(counts, values)) / shots
    if shots < 2:
        return mean, 0.0
    var = shots * (1.0 - mean * mean) / (shots - 1)
    return mean, math.sqrt(max(var, 0.0) / shots)


def _gate_unitary(gate: Gate, angle: float) -> np.ndarray:
    if gate.kind == "h":
        return _H_MATRIX
    if gate.kind == "x":
        return _X_MATRIX
    return _rotation_matrix(gate.kind, angle)


def _dm_apply_1q(rho: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    dim = 1 << n
    rho = rho.reshape(-1, 2, (1 << q) * dim)
    rho = np.einsum("ab,xbz->xaz", u, rho)
    rho = rho.reshape(dim, dim).T.conj().reshape(-1, 2, (1 << q) * dim)
    rho = np.einsum("ab,xbz->xaz", u, rho)
    return rho.reshape(dim, dim).T.conj()


def _dm_apply_cnot_cz(rho: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    dim = 1 << n
    idx = np.arange(dim)
    if gate.kind == "cnot":
        c, t = gate.qubits
        perm = np.where((idx >> c) & 1 == 1, idx ^ (1 << t), idx)
        return rho[np.ix_(perm, perm)]
    a, b = gate.qubits
    sign = 1.0 - 2.0 * (((idx >> a) & 1) & ((idx >> b) & 1))
    return rho * np.outer(sign, sign)


def _replace_qubit_by_mixed(t: np.ndarray, q: int, n: int) -> np.ndarray:
    """(I/2 (x) Tr_q) applied to a density tensor of shape [2]*(2n)."""
    ket_ax, bra_ax = n - 1 - q, 2 * n - 1 - q
    tr = np.trace(t, axis1=ket_ax, axis2=bra_ax)
    tr = np.expand_dims(np.expand_dims(tr, ket_ax), bra_ax)
    eye = np.eye(2).reshape([2 if i in (ket_ax, bra_ax) else 1 for i in range(2 * n)])
    return 0.5 * eye * tr


def _dm_depolarize(rho: np.ndarray, qubits: tuple[int, ...], p: float, n: int) -> np.ndarray:
    if p == 0.0:
        return rho
    dim = 1 << n
    t = rho.reshape([2] * (2 * n))
    mixed = t
    for q in qubits:
        mixed = _replace_qubit_by_mixed(mixed, q, n)
    return ((1 - p) * t + p * mixed).reshape(dim, dim)


def _channel_probs(circuit: Circuit, params: np.ndarray, noise: NoiseProfile,
                   initial_index: int, shift: tuple[int, float] | None = None) -> np.ndarray:
    """Exact outcome distribution of the noisy circuit (small registers)."""
    n = circuit.n_qubits
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=complex)
    rho[initial_index, initial_index] = 1.0
    for i, gate in enumerate(circuit.gates):
        if gate.kind in ("cnot", "cz"):
            rho = _dm_apply_cnot_cz(rho, gate, n)
            rho = _dm_depolarize(rho, gate.qubits, noise.p2, n)
        else:
            angle = gate.resolve_angle(params) if gate.kind in ROTATION_KINDS else 0.0
            if shift is not None and shift[0] == i:
                angle += shift[1]
            rho = _dm_apply_1q(rho, _gate_unitary(gate, angle), gate.qubits[0], n)
            rho = _dm_depolarize(rho, gate.qubits, noise.p1, n)
    probs = np.real(np.diag(rho)).copy()
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def _trajectory_outcomes(circuit: Circuit, params: np.ndarray, noise: NoiseProfile,
                         shots: int, rng: np.random.Generator,
                         initial_index: int, shift: tuple[int, float] | None = None) -> np.ndarray:
    """Per-shot bitstring outcomes via stochastic Pauli insertion."""
    n = circuit.n_qubits
    dim = 1 << n
    gates = circuit.gates
    # sample error events: gate index -> (shot ids, pauli codes)
    events: list[tuple[int, np.ndarray, np.ndarray]] = []
    shot_has_error = np.zeros(shots, dtype=bool)
    for i, gate in enumerate(gates):
        two = gate.kind in ("cnot", "cz")
        p = noise.p2 if two else noise.p1
        # uniform over the full Pauli set incl. identity; identity draws are no-ops
        eff = p * (15 / 16 if two else 3 / 4)
        if eff == 0.0:
            continue
        hits = np.nonzero(rng.random(shots) < eff)[0]
        if hits.size == 0:
            continue
        codes = rng.integers(1, 16 if two else 4, size=hits.size)
        events.append((i, hits, codes))
        shot_has_error[hits] = True
    err_shots = np.nonzero(shot_has_error)[0]
    outcomes = np.empty(shots, dtype=np.int64)

    # error-free shots share the ideal statevector
    ideal = run_statevector(circuit, params, initial_index, shift)
    clean = shots - err_shots.size
    if clean:
        probs = np.abs(ideal) ** 2
        probs = probs / probs.sum()
        counts = rng.multinomial(clean, probs)
        outcomes[~shot_has_error] = np.repeat(np.arange(dim), counts)

    if err_shots.size:
        remap = {s: k for k, s in enumerate(err_shots)}
        batch = np.zeros((err_shots.size, dim), dtype=complex)
        batch[:, initial_index] = 1.0
        by_gate = {i: (hits, codes) for i, hits, codes in events}
        for i, gate in enumerate(gates):
            batch = _batch_apply_gate(batch, circuit, i, gate, params, shift)
            if i in by_gate:
                hits, codes = by_gate[i]
                rows = np.array([remap[s] for s in hits])
                _batch_apply_errors(batch, rows, codes, gate, n)
        probs = np.abs(batch) ** 2
        probs /= probs.sum(axis=1, keepdims=True)
        cum = np.cumsum(probs, axis=1)
        draws = rng.random(err_shots.size)
        outcomes[err_shots] = (cum < draws[:, None]).sum(axis=1)
    return outcomes


def _batch_apply_gate(batch, circuit, i, gate, params, shift=None):
    n = circuit.n_qubits
    kind = gate.kind
    if kind == "h":
        return _batch_1q(batch, _H_MATRIX, gate.qubits[0], n)
    if kind == "x":
        return batch[:, circuit._static(i, gate)]
    if kind in ("rx", "ry", "rz"):
        angle = gate.resolve_angle(params)
        if shift is not None and shift[0] == i:
            angle += shift[1]
        return _batch_1q(batch, _rotation_matrix(kind, angle), gate.qubits[0], n)
    if kind == "cnot":
        return batch[:, circuit._static(i, gate)]
    if kind == "cz":
        return batch * circuit._static(i, gate)[None, :]
    raise DomainError(f"gate {kind!r} not available on the sampled path")


def _batch_1q(batch, u, q, n):
    rows = batch.shape[0]
    view = batch.reshape(rows, -1, 2, 1 << q)
    v0, v1 = view[:, :, 0, :], view[:, :, 1, :]
    out = np.empty_like(view)
    out[:, :, 0, :] = u[0, 0] * v0 + u[0, 1] * v1
    out[:, :, 1, :] = u[1, 0] * v0 + u[1, 1] * v1
    return out.reshape(rows, -1)


_PAULI_1Q = {1: "X", 2: "Y", 3: "Z"}


def _batch_apply_errors(batch, rows, codes, gate, n):
    """Apply sampled Pauli errors in place to selected batch rows."""
    if gate.kind in ("cnot", "cz"):
        qa, qb = gate.qubits
        for code in np.unique(codes):
            sub = rows[codes == code]
            ca, cb = code % 4, code // 4
            label = ["I"] * n
            if ca:
                label[qa] = _PAULI_1Q[ca]
            if cb:
                label[qb] = _PAULI_1Q[cb]
            p = PauliString.from_label("".join(label))
            if p.is_identity:
                continue
            perm = np.arange(1 << n) ^ p.x
            phase = pauli_phase_vector(p)
            batch[sub] = phase[perm][None, :] * batch[np.ix_(sub, perm)]
    else:
        q = gate.qubits[0]
        for code in np.unique(codes):
            sub = rows[codes == code]
            label = ["I"] * n
            label[q] = _PAULI_1Q[code]
            p = PauliString.from_label("".join(label))
            perm = np.arange(1 << n) ^ p.x
            phase = pauli_phase_vector(p)
            batch[sub] = phase[perm][None, :] * batch[np.ix_(sub, perm)]


_CHANNEL_PATH_MAX_QUBITS = 5


def expectation_sampled(circuit: Circuit, params, op: QubitOperator, shots: int,
                        noise: NoiseProfile | None = None,
                        rng: np.random.Generator | int | None = None,
                        initial_index: int = 0,
                        shift_ordinal: tuple[int, float] | None = None) -> tuple[float, float]:
    """Shot-based estimate of <op> with optional gate/readout noise.

    Each non-identity Pauli term is measured on its own circuit with `shots`
    shots (equal per-term share, no commuting-term grouping); the identity
    term enters analytically. Returns (mean, stderr) with the stderr
    propagated term-wise assuming independence.

    `shift_ordinal` = (k, delta) offsets the angle of the k-th parameterized
    gate (compilation preserves parameterized-gate order), the hook used by
    the exact sub-gate shift rule on sampled backends.
    """
    if shots < 1:
        raise DomainError("shots must be a positive integer")
    if not op.is_hermitian():
        raise DomainError("sampled expectation of a non-Hermitian operator")
    if op.n_qubits != circuit.n_qubits:
        raise DimensionError("operator and circuit qubit counts differ")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    params = np.zeros(circuit.n_params) if params is None else np.asarray(params, dtype=float)

    if noise is not None and noise.trivial:
        noise = None

    mean = 0.0
    var = 0.0
    for string, coeff in op.terms():
        c = coeff.real
        if string.is_identity:
            mean += c
            continue
        meas = _measurement_cached(circuit, string)
        shift = None
        if shift_ordinal is not None:
            k, delta = shift_ordinal
            shift = (meas.parameterized_gates()[k][0], delta)
        support = string.support
        values = _parity_values(circuit.n_qubits, support)
        if noise is None:
            psi = run_statevector(meas, params, initial_index, shift)
            probs = np.abs(psi) ** 2
            probs = probs / probs.sum()
            counts = rng.multinomial(shots, probs)
            m, se = _mean_stderr_from_counts(counts, values)
        elif circuit.n_qubits <= _CHANNEL_PATH_MAX_QUBITS:
            probs = _channel_probs(meas, params, noise, initial_index, shift)
            probs = _apply_readout_to_probs(probs.copy(), noise, circuit.n_qubits, support)
            counts = rng.multinomial(shots, probs)
            m, se = _mean_stderr_from_counts(counts, values)
        else:
            outcomes = _trajectory_outcomes(meas, params, noise, shots, rng, initial_index, shift)
            outcomes = _apply_readout_to_outcomes(outcomes, noise, support, rng)
            vals = values[outcomes]
            m = float(vals.mean())
            se = float(vals.std(ddof=1) / math.sqrt(shots)) if shots > 1 else 0.0
        mean += c * m
        var += (c * se) ** 2
    return mean, math.sqrt(var)


def _apply_readout_to_outcomes(outcomes: np.ndarray, noise: NoiseProfile, support: int,
                               rng: np.random.Generator) -> np.ndarray:
    out = outcomes.copy()
    q = 0
    mask = support
    while mask:
        if mask & 1:
            p10, p01 = noise.readout_pair(q)
            if p10 or p01:
                bit = (out >> q) & 1
                p_flip = np.where(bit == 1, p01, p10)
                flips = rng.random(out.size) < p_flip
                out = out ^ (flips.astype(np.int64) << q)
        mask >>= 1
        q += 1
    return out


def _measurement_cached(circuit: Circuit, string: PauliString) -> Circuit:
    cache = getattr(circuit, "_meas_cache", None)
    if cache is None:
        cache = {}
        circuit._meas_cache = cache
    key = (string.x, string.z)
    meas = cache.get(key)
    if meas is None:
        meas = _measurement_circuit(circuit, string)
        cache[key] = meas
    return meas


# ---------------------------------------------------------------------------
# Backend configuration and the energy-evaluation front end


@dataclass(frozen=True)
class BackendSpec:
    """Which simulation tier evaluates energies."""

    kind: str = "statevector"  # "statevector" | "sampled"
    shots: int = 8192
    noise: NoiseProfile | None = None

    def __post_init__(self):
        if self.kind not in ("statevector", "sampled"):
            raise DomainError(f"unknown backend kind {self.kind!r}")
        if self.shots < 1:
            raise DomainError("shots must be positive")

    def describe(self) -> dict:
        out = {"backend": self.kind}
        if self.kind == "sampled":
            out["shots_per_term"] = self.shots
            out["noise"] = None if self.noise is None else json.loads(self.noise.to_json())
        return out


class EnergyEvaluator:
    """Bound (circuit, operator, backend) energy function with sub-gate shifts.

    The statevector path precomputes per-term permutation/phase tables, the
    hot loop of every VQE cost evaluation. For sampled backends a stateful
    RNG draws fresh shots per call; reruns with the same seed are
    bit-identical.
    """

    def __init__(self, circuit: Circuit, op: QubitOperator, spec: BackendSpec,
                 rng: np.random.Generator | int | None = None, initial_index: int = 0):
        if circuit.n_qubits != op.n_qubits:
            raise DimensionError("circuit and operator qubit counts differ")
        if not op.is_hermitian():
            raise DomainError("energy of a non-Hermitian operator")
        self.circuit = circuit
        self.op = op
        self.spec = spec
        self.initial_index = initial_index
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self._identity = float(op.identity_coefficient.real)
        strings = [(s, c.real) for s, c in op.terms() if not s.is_identity]
        dim = 1 << op.n_qubits
        idx = np.arange(dim)
        self._coeffs = np.array([c for _, c in strings])
        self._perms = np.array([idx ^ s.x for s, _ in strings], dtype=np.intp).reshape(
            len(strings), dim
        )
        self._phases = np.array(
            [pauli_phase_vector(s)[p] for (s, _), p in zip(strings, self._perms)]
        ).reshape(len(strings), dim)

    def _exact(self, psi: np.ndarray) -> float:
        if self._coeffs.size == 0:
            return self._identity
        weighted = self._phases * psi[self._perms]
        return self._identity + float(np.real(self._coeffs @ (weighted @ psi.conj())))

    def energy(self, params, shift_ordinal: tuple[int, float] | None = None) -> float:
        if self.spec.kind == "statevector":
            shift = None
            if shift_ordinal is not None:
                k, delta = shift_ordinal
                shift = (self.circuit.parameterized_gates()[k][0], delta)
            psi = run_statevector(self.circuit, params, self.initial_index, shift)
            return self._exact(psi)
        mean, _ = expectation_sampled(
            self.circuit, params, self.op, self.spec.shots, self.spec.noise,
            self.rng, self.initial_index, shift_ordinal,
        )
        return mean

    def statevector(self, params) -> np.ndarray:
        return run_statevector(self.circuit, params, self.initial_index)


__all__ = [
    "BackendSpec",
    "Circuit",
    "EnergyEvaluator",
    "Gate",
    "NoiseProfile",
    "expectation_exact",
    "expectation_sampled",
    "pauli_phase_vector",
    "run_statevector",
]
