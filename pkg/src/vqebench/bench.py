"""Potential-energy-curve scans, error metrics, and report emission.

Metric definitions (all reported as absolute values):
  delta_gs     = |(E_gs_exact - E_gs_vqe) / E_gs_exact|, each ground energy
                 taken at its own curve's minimum grid point;
  delta_de     = same relative form for the dissociation energy
                 E_de = E(4 A) - E_gs, exact and VQE curves separately;
  dipole_rmse  = sqrt(mean (mu_exact - mu_vqe)^2) over the grid points
                 inside the molecule's dipole window, in e*a0.

The "average error" column is the plain mean of the available metric
columns; it mixes dimensionless energy ratios with e*a0 dipole RMSE, which
is flagged in every report header.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ansatz import AnsatzSpec
from .backend import BackendSpec, expectation_exact
from .errors import DomainError, SchemaError, UnsupportedMetricError
from .fermion import Mapping
from .moldata import GeometrySeries, MolecularData, build_dipole, build_hamiltonian
from .seeding import derive_seed
from .vqe import CircuitCost, VqeProblem, exact_ground_state, vqe_minimize

DIPOLE_WINDOWS = {"LiH": (1.3, 2.0), "H2O": (0.7, 1.2), "HF": (0.8, 1.4)}
DISSOCIATION_DISTANCE = 4.0


@dataclass(frozen=True)
class ScanPoint:
    geometry_param: float
    e_vqe: float
    e_exact: float
    dipole_vqe: float | None
    dipole_exact: float | None
    n_iterations: int
    n_evaluations: int


@dataclass(frozen=True)
class ScanConfig:
    mapping: Mapping = Mapping.PARITY_REDUCED
    max_iter: int = 100
    seed: int = 0
    optimizer_options: dict = field(default_factory=dict)
    dipole: str = "auto"  # "auto" | "off" | "require"
    average_runs: int = 1  # SPSA-style repeat-and-average per grid point
    workers: int = 0  # 0: use VQEBENCH_WORKERS (default 1)


@dataclass(frozen=True)
class ScanResult:
    molecule: str
    optimizer: str
    points: tuple[ScanPoint, ...]
    metadata: dict

    def __post_init__(self):
        params = [p.geometry_param for p in self.points]
        if any(b <= a for a, b in zip(params, params[1:])):
            raise DomainError("scan grid must be strictly increasing")
        if self.metadata.get("backend") == "statevector":
            for p in self.points:
                if p.e_exact > p.e_vqe + 1e-9:
                    raise DomainError(
                        f"variational bound violated at r={p.geometry_param}"
                    )

    @property
    def params(self) -> list[float]:
        return [p.geometry_param for p in self.points]


def _dipole_magnitude(vector_components) -> float:
    return float(np.linalg.norm(vector_components))


def _scan_one_point(entry: MolecularData, ansatz: AnsatzSpec, optimizer: str,
                    backend: BackendSpec, config: ScanConfig) -> ScanPoint:
    hamiltonian = build_hamiltonian(entry, config.mapping)
    want_dipole = config.dipole != "off" and (
        entry.dipole_ints is not None or config.dipole == "require"
    )
    dipole_ops = None
    if want_dipole:
        dipole_ops = [build_dipole(entry, config.mapping, ax) for ax in range(3)]

    if config.mapping is Mapping.JW:
        e_exact, exact_vec = exact_ground_state(
            hamiltonian, particle_filter=(entry.n_electrons, Mapping.JW)
        )
    else:
        e_exact, exact_vec = exact_ground_state(hamiltonian)

    energies = []
    dipoles = []
    iters = []
    evals = []
    for rep in range(max(1, config.average_runs)):
        seed = derive_seed(
            config.seed, entry.name, optimizer, f"{entry.geometry_param:.6f}", rep
        )
        problem = VqeProblem(
            hamiltonian=hamiltonian,
            ansatz=ansatz,
            n_spin_orbitals=2 * entry.n_spatial,
            n_electrons=entry.n_electrons,
            mapping=config.mapping,
            backend=backend,
            seed=seed,
        )
        result = vqe_minimize(
            problem, optimizer, max_iter=config.max_iter,
            options=config.optimizer_options,
        )
        energies.append(result.energy)
        iters.append(result.optimizer.n_iterations)
        evals.append(result.optimizer.n_evaluations)
        if dipole_ops is not None:
            cost = CircuitCost(problem.build_circuit(), hamiltonian, BackendSpec(), seed)
            state = cost.statevector(result.params)
            dipoles.append(
                _dipole_magnitude([expectation_exact(state, d) for d in dipole_ops])
            )
    dip_exact = None
    dip_vqe = None
    if dipole_ops is not None:
        dip_exact = _dipole_magnitude(
            [float(np.real(exact_vec.conj() @ (d.to_matrix() @ exact_vec))) for d in dipole_ops]
        )
        dip_vqe = float(np.mean(dipoles))
    return ScanPoint(
        geometry_param=float(entry.geometry_param),
        e_vqe=float(np.mean(energies)),
        e_exact=e_exact,
        dipole_vqe=dip_vqe,
        dipole_exact=dip_exact,
        n_iterations=int(np.mean(iters)),
        n_evaluations=int(np.mean(evals)),
    )


def scan_curve(series: GeometrySeries, ansatz: AnsatzSpec, optimizer: str,
               backend: BackendSpec, config: ScanConfig | None = None) -> ScanResult:
    """Independent cold-start VQE run per grid point plus exact references."""
    config = config or ScanConfig()
    if config.dipole == "require" and series.entries[0].dipole_ints is None:
        raise UnsupportedMetricError("series carries no dipole integrals")
    workers = config.workers or int(os.environ.get("VQEBENCH_WORKERS", "1"))
    entries = list(series)
    if workers > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(
                pool.map(
                    _scan_one_point,
                    entries,
                    [ansatz] * len(entries),
                    [optimizer] * len(entries),
                    [backend] * len(entries),
                    [config] * len(entries),
                )
            )
    else:
        points = [
            _scan_one_point(e, ansatz, optimizer, backend, config) for e in entries
        ]
    tier = backend.kind
    if backend.kind == "sampled" and backend.noise is not None and not backend.noise.trivial:
        tier = "sampled+noise"
    metadata = {
        "molecule": series.name,
        "optimizer": optimizer,
        "tier": tier,
        "seed": config.seed,
        "max_iter": config.max_iter,
        "mapping": config.mapping.value,
        "average_runs": config.average_runs,
        "grid": [float(e.geometry_param) for e in entries],
        **backend.describe(),
        **ansatz.describe(),
    }
    return ScanResult(series.name, optimizer, tuple(points), metadata)


@dataclass(frozen=True)
class Metrics:
    delta_gs: float
    delta_de: float | None
    dipole_rmse: float | None

    def __post_init__(self):
        values = [self.delta_gs, self.delta_de, self.dipole_rmse]
        for v in values:
            if v is not None and (not math.isfinite(v) or v < 0):
                raise DomainError("metrics must be finite and non-negative")

    @property
    def average_error(self) -> float:
        values = [v for v in (self.delta_gs, self.delta_de, self.dipole_rmse) if v is not None]
        return float(np.mean(values))

    def to_dict(self) -> dict:
        return {
            "delta_gs": self.delta_gs,
            "delta_de": self.delta_de,
            "dipole_rmse": self.dipole_rmse,
            "average_error": self.average_error,
        }


def compute_metrics(scan: ScanResult, dipole_window: tuple[float, float] | None = None) -> Metrics:
    """Error metrics of one scan; dissociation requires a 4 A grid point."""
    points = scan.points
    e_exact = [p.e_exact for p in points]
    e_vqe = [p.e_vqe for p in points]
    gs_exact = min(e_exact)
    gs_vqe = min(e_vqe)
    delta_gs = abs((gs_exact - gs_vqe) / gs_exact)

    delta_de = None
    far = [p for p in points if abs(p.geometry_param - DISSOCIATION_DISTANCE) < 1e-6]
    if far:
        de_exact = far[0].e_exact - gs_exact
        de_vqe = far[0].e_vqe - gs_vqe
        if abs(de_exact) > 1e-300:
            delta_de = abs((de_exact - de_vqe) / de_exact)

    dipole_rmse = None
    have_dipole = any(p.dipole_exact is not None for p in points)
    if have_dipole:
        window = dipole_window or DIPOLE_WINDOWS.get(scan.molecule)
        if window is not None:
            lo, hi = window
            inside = [
                p for p in points
                if lo - 1e-9 <= p.geometry_param <= hi + 1e-9 and p.dipole_exact is not None
            ]
            if not inside:
                raise DomainError(
                    f"dipole window {window} excludes every grid point of {scan.molecule}"
                )
            sq = [(p.dipole_exact - p.dipole_vqe) ** 2 for p in inside]
            dipole_rmse = math.sqrt(float(np.mean(sq)))
    return Metrics(delta_gs, delta_de, dipole_rmse)


def iterations_to_tolerance(problem: VqeProblem, optimizer: str, tol: float = 1e-6,
                            cap: int = 10_000,
                            options: dict | None = None) -> tuple[int, int, bool]:
    """First iteration/evaluation at which the energy is within relative `tol`
    of the exact ground energy, with the iteration cap lifted to `cap`."""
    from .optim import minimize

    e_exact, _ = exact_ground_state(problem.hamiltonian)
    threshold = e_exact + tol * abs(e_exact)
    circuit = problem.build_circuit()
    inner = CircuitCost(circuit, problem.hamiltonian, problem.backend, problem.seed)
    values: list[float] = []

    class Recording:
        def __call__(self, params):
            v = inner(params)
            values.append(v)
            return v

        def shift_gradient(self, params, mode, on_eval=None):
            def tick(v):
                values.append(v)
                if on_eval is not None:
                    on_eval(v)

            return inner.shift_gradient(params, mode, on_eval=tick)

    result = minimize(
        optimizer, Recording(), np.zeros(circuit.n_params),
        max_iter=cap, seed=problem.seed, options=options,
    )
    hit = next((i for i, v in enumerate(values) if v <= threshold), None)
    if hit is None:
        return result.n_iterations, result.n_evaluations, False
    eval_index = hit + 1
    iteration = result.trajectory[-1][0]
    for (it, _), count in zip(result.trajectory, result.eval_counts):
        if count >= eval_index:
            iteration = it
            break
    return iteration, eval_index, True


# ---------------------------------------------------------------------------
# Persisted runs and reports


@dataclass(frozen=True)
class BenchmarkRow:
    molecule: str
    optimizer: str
    tier: str
    metrics: Metrics

    @property
    def average_error(self) -> float:
        return self.metrics.average_error


def run_record(scan: ScanResult, metrics: Metrics) -> dict:
    return {
        "record": "vqebench-run/1",
        "molecule": scan.molecule,
        "optimizer": scan.optimizer,
        "metadata": scan.metadata,
        "points": [
            {
                "r_angstrom": p.geometry_param,
                "e_vqe": p.e_vqe,
                "e_exact": p.e_exact,
                "dipole_vqe": p.dipole_vqe,
                "dipole_exact": p.dipole_exact,
                "n_iterations": p.n_iterations,
                "n_evaluations": p.n_evaluations,
            }
            for p in scan.points
        ],
        "metrics": metrics.to_dict(),
    }


def load_run_records(directory: str | Path) -> list[dict]:
    paths = sorted(Path(directory).glob("run_*.json"))
    if not paths:
        raise SchemaError(f"no run_*.json records under {directory}")
    records = []
    for p in paths:
        rec = json.loads(p.read_text())
        if rec.get("record") != "vqebench-run/1":
            raise SchemaError(f"{p} is not a vqebench run record")
        records.append(rec)
    return records


def rows_from_records(records: list[dict], aggregate: str = "seeds") -> tuple[list[BenchmarkRow], dict]:
    """Build report rows; aggregate = none | seeds | optimizer (means)."""
    if aggregate not in ("none", "seeds", "optimizer"):
        raise DomainError(f"unknown aggregation {aggregate!r}")
    shared: dict = {}
    for rec in records:
        meta = rec["metadata"]
        for key in ("tier", "max_iter", "ansatz", "shots_per_term", "noise", "mapping"):
            if key in meta:
                shared.setdefault(key, set()).add(json.dumps(meta[key]))
    header = {
        k: json.loads(next(iter(v))) if len(v) == 1 else sorted(json.loads(x) for x in v)
        for k, v in shared.items()
    }

    def key_of(rec):
        if aggregate == "none":
            return (rec["molecule"], rec["optimizer"], rec["metadata"]["seed"])
        if aggregate == "seeds":
            return (rec["molecule"], rec["optimizer"])
        return rec["optimizer"]

    groups: dict = {}
    for rec in records:
        groups.setdefault(key_of(rec), []).append(rec)

    def mean_or_none(values):
        present = [v for v in values if v is not None]
        return float(np.mean(present)) if present else None

    rows = []
    for key in sorted(groups, key=str):
        recs = groups[key]
        metrics = Metrics(
            delta_gs=mean_or_none([r["metrics"]["delta_gs"] for r in recs]),
            delta_de=mean_or_none([r["metrics"]["delta_de"] for r in recs]),
            dipole_rmse=mean_or_none([r["metrics"]["dipole_rmse"] for r in recs]),
        )
        molecule = recs[0]["molecule"] if aggregate != "optimizer" else ",".join(
            sorted({r["molecule"] for r in recs})
        )
        optimizer = recs[0]["optimizer"] if aggregate != "optimizer" else key
        if aggregate == "none":
            molecule = f"{molecule} (seed {recs[0]['metadata']['seed']})"
        rows.append(
            BenchmarkRow(molecule, optimizer, recs[0]["metadata"]["tier"], metrics)
        )
    return rows, header


def _format_value(v) -> str:
    return "-" if v is None else f"{v:.6e}"


EA0_TO_DEBYE = 2.541746473  # CODATA conversion, 1 e*a0 in debye


def emit_report(rows: list[BenchmarkRow], fmt: str = "csv",
                metadata: dict | None = None, dipole_unit: str = "ea0") -> bytes:
    """Deterministic CSV/Markdown table sorted ascending by average error.

    Dipole RMSE is reported in e*a0 by default; dipole_unit="debye" applies
    the CODATA conversion (the average-error column is recomputed from the
    converted value, matching the displayed columns).
    """
    if not rows:
        raise DomainError("cannot emit a report with no rows")
    if fmt not in ("csv", "md", "markdown"):
        raise DomainError(f"unknown report format {fmt!r}")
    if dipole_unit not in ("ea0", "debye"):
        raise DomainError(f"unknown dipole unit {dipole_unit!r}")
    scale = EA0_TO_DEBYE if dipole_unit == "debye" else 1.0
    converted = [
        (row, Metrics(
            row.metrics.delta_gs,
            row.metrics.delta_de,
            None if row.metrics.dipole_rmse is None else row.metrics.dipole_rmse * scale,
        ))
        for row in rows
    ]
    ordered = sorted(converted, key=lambda rm: (rm[1].average_error, rm[0].optimizer, rm[0].molecule))
    header_meta = dict(metadata or {})
    header_meta.setdefault("dipole_unit", dipole_unit)
    header_meta.setdefault(
        "note",
        "average error mixes dimensionless energy ratios with dipole RMSE",
    )
    columns = ["Optimizer", "Molecule", "Tier", "Delta_gs", "Delta_de", "Delta_dipole", "Average Error"]
    table = [
        [
            r.optimizer,
            r.molecule,
            r.tier,
            _format_value(m.delta_gs),
            _format_value(m.delta_de),
            _format_value(m.dipole_rmse),
            _format_value(m.average_error),
        ]
        for r, m in ordered
    ]
    lines = [f"# {k} = {json.dumps(header_meta[k])}" for k in sorted(header_meta)]
    if fmt == "csv":
        lines.append(",".join(columns))
        lines.extend(",".join(row) for row in table)
    else:
        lines.append("| " + " | ".join(columns) + " |")
        lines.append("|" + "|".join("---" for _ in columns) + "|")
        lines.extend("| " + " | ".join(row) + " |" for row in table)
    return ("\n".join(lines) + "\n").encode()


# ---------------------------------------------------------------------------
# Suite driver


@dataclass(frozen=True)
class SuiteConfig:
    data_dir: Path
    molecules: tuple[str, ...]
    optimizers: tuple[str, ...]
    seeds: tuple[int, ...] = (0,)
    backend: BackendSpec = field(default_factory=BackendSpec)
    ansatz: AnsatzSpec = field(default_factory=AnsatzSpec)
    mapping: Mapping = Mapping.PARITY_REDUCED
    max_iter: int = 100
    grid_stride: int = 1
    optimizer_options: dict = field(default_factory=dict)
    workers: int = 0
    dipole: str = "auto"
    average_runs: int = 1


def run_suite(config: SuiteConfig, out_dir: str | Path, verbose=print) -> list[Path]:
    """Execute every (molecule, optimizer, seed) scan and persist run records."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for molecule in config.molecules:
        series = GeometrySeries.load(Path(config.data_dir) / molecule.lower())
        if config.grid_stride > 1:
            series = series.subsample(config.grid_stride)
        for optimizer in config.optimizers:
            options = dict(config.optimizer_options.get(optimizer, {}))
            for seed in config.seeds:
                scan_cfg = ScanConfig(
                    mapping=config.mapping,
                    max_iter=config.max_iter,
                    seed=seed,
                    optimizer_options=options,
                    dipole=config.dipole,
                    average_runs=config.average_runs,
                    workers=config.workers,
                )
                scan = scan_curve(series, config.ansatz, optimizer, config.backend, scan_cfg)
                metrics = compute_metrics(scan)
                record = run_record(scan, metrics)
                name = f"run_{series.name.lower()}_{optimizer}_s{seed}.json"
                path = out / name
                path.write_text(json.dumps(record, indent=1))
                written.append(path)
                verbose(
                    f"  {series.name} {optimizer} seed={seed}: "
                    f"avg_err={metrics.average_error:.3e}"
                )
    return written
