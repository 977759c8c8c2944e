"""vqebench command line.

Subcommands: hamiltonian, vqe, scan, bench, report. Exit codes: 0 success,
2 input error, 3 numeric failure. Every flag can also be supplied through a
key-value/table config file (flags win).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


from . import __version__
from .ansatz import AnsatzKind, AnsatzSpec
from .backend import BackendSpec, NoiseProfile
from .bench import (
    ScanConfig,
    SuiteConfig,
    compute_metrics,
    emit_report,
    load_run_records,
    rows_from_records,
    run_record,
    run_suite,
    scan_curve,
)
from .config import config_value, parse_config
from .errors import (
    DimensionError,
    DomainError,
    NumericError,
    ResourceLimitError,
    SchemaError,
    SymmetryError,
    UnsupportedGateError,
    UnsupportedMetricError,
    VqeBenchError,
)
from .fermion import Mapping
from .moldata import GeometrySeries, build_hamiltonian, load_moldata
from .vqe import VqeProblem, exact_ground_state, vqe_minimize

INPUT_ERRORS = (
    SchemaError,
    SymmetryError,
    DimensionError,
    DomainError,
    UnsupportedMetricError,
    UnsupportedGateError,
    FileNotFoundError,
)
NUMERIC_ERRORS = (NumericError, ResourceLimitError)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    return parse_config(Path(path).read_text())


def _merged(args, config: dict, key: str, default=None):
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    found = config_value(config, key)
    return default if found is None else found


def _ansatz_from(name: str, config: dict) -> AnsatzSpec:
    if name == "uccsd":
        return AnsatzSpec(AnsatzKind.UCCSD)
    if name == "twolocal":
        table = config.get("twolocal", {})
        return AnsatzSpec(
            AnsatzKind.TWO_LOCAL,
            rotation_blocks=tuple(table.get("rotation_blocks", ["h", "ry"])),
            entangler=table.get("entangler", "cz"),
            entanglement=table.get("entanglement", "full"),
            repetitions=int(table.get("repetitions", 2)),
        )
    raise DomainError(f"unknown ansatz {name!r} (uccsd or twolocal)")


def _backend_from(kind: str, shots: int, noise_path: str | None,
                  noise_table: dict | None = None) -> BackendSpec:
    noise = None
    if noise_path:
        noise = NoiseProfile.from_json(Path(noise_path).read_text())
    elif noise_table:
        noise = NoiseProfile(
            p1=float(noise_table.get("p1", 0.0)),
            p2=float(noise_table.get("p2", 0.0)),
            readout=tuple(tuple(map(float, pair)) for pair in noise_table.get("readout", [])),
        )
    return BackendSpec(kind=kind, shots=shots, noise=noise)


def _optimizer_options(config: dict, optimizer: str) -> dict:
    table = config.get("optimizer", {})
    if isinstance(table, dict):
        sub = table.get(optimizer, {})
        if isinstance(sub, dict):
            return dict(sub)
    return {}


def _write_output(text: str | bytes, out: str | None):
    data = text.encode() if isinstance(text, str) else text
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())


# -- subcommand implementations ----------------------------------------------


def cmd_hamiltonian(args) -> int:
    moldata = load_moldata(args.data)
    mapping = Mapping.from_name(args.mapping)
    op = build_hamiltonian(moldata, mapping)
    header = (
        f"# molecule = {moldata.name}\n"
        f"# mapping = {mapping.value}\n"
        f"# n_qubits = {op.n_qubits}\n"
    )
    _write_output(header + op.to_text(), args.out)
    return 0


def cmd_vqe(args) -> int:
    config = _load_config(args.config)
    moldata = load_moldata(args.data)
    mapping = Mapping.from_name(_merged(args, config, "mapping", "parity-reduced"))
    ansatz = _ansatz_from(_merged(args, config, "ansatz", "uccsd"), config)
    backend = _backend_from(
        _merged(args, config, "backend", "statevector"),
        int(_merged(args, config, "shots", 8192)),
        args.noise or config.get("noise") if isinstance(config.get("noise"), str) else args.noise,
        config.get("noise") if isinstance(config.get("noise"), dict) else None,
    )
    optimizer = _merged(args, config, "optimizer", "cg")
    seed = int(_merged(args, config, "seed", 0))
    max_iter = int(_merged(args, config, "max-iter", 100))
    hamiltonian = build_hamiltonian(moldata, mapping)
    problem = VqeProblem(
        hamiltonian=hamiltonian,
        ansatz=ansatz,
        n_spin_orbitals=2 * moldata.n_spatial,
        n_electrons=moldata.n_electrons,
        mapping=mapping,
        backend=backend,
        seed=seed,
    )
    result = vqe_minimize(
        problem, optimizer, max_iter=max_iter,
        options=_optimizer_options(config, optimizer),
    )
    if result.optimizer.status != "ok":
        print(f"numeric failure: {result.optimizer.message}", file=sys.stderr)
        return 3
    exact = None
    if hamiltonian.n_qubits <= 14:
        exact, _ = exact_ground_state(hamiltonian)
    doc = {
        "molecule": moldata.name,
        "geometry_param_angstrom": moldata.geometry_param,
        "energy": result.energy,
        "exact_energy": exact,
        "params": [float(p) for p in result.params],
        "n_iterations": result.optimizer.n_iterations,
        "n_evaluations": result.optimizer.n_evaluations,
        "metadata": result.metadata,
    }
    _write_output(json.dumps(doc, indent=1) + "\n", args.out)
    return 0


def cmd_scan(args) -> int:
    config = _load_config(args.config)
    series = GeometrySeries.load(args.series)
    stride = int(_merged(args, config, "stride", 1))
    if stride > 1:
        series = series.subsample(stride)
    mapping = Mapping.from_name(_merged(args, config, "mapping", "parity-reduced"))
    ansatz = _ansatz_from(_merged(args, config, "ansatz", "uccsd"), config)
    backend = _backend_from(
        _merged(args, config, "backend", "statevector"),
        int(_merged(args, config, "shots", 8192)),
        args.noise,
        config.get("noise") if isinstance(config.get("noise"), dict) else None,
    )
    optimizer = _merged(args, config, "optimizer", "cg")
    scan_cfg = ScanConfig(
        mapping=mapping,
        max_iter=int(_merged(args, config, "max-iter", 100)),
        seed=int(_merged(args, config, "seed", 0)),
        optimizer_options=_optimizer_options(config, optimizer),
        average_runs=int(_merged(args, config, "average-runs", 1)),
        workers=int(_merged(args, config, "workers", 0)),
    )
    scan = scan_curve(series, ansatz, optimizer, backend, scan_cfg)
    metrics = compute_metrics(scan)
    _write_output(json.dumps(run_record(scan, metrics), indent=1) + "\n", args.out)
    return 0


def cmd_bench(args) -> int:
    config = _load_config(args.suite)
    suite = config.get("suite")
    if not isinstance(suite, dict):
        raise SchemaError("suite config needs a [suite] table")
    required = {"molecules", "optimizers"}
    missing = required - suite.keys()
    if missing:
        raise SchemaError(f"[suite] missing keys: {sorted(missing)}")
    backend = _backend_from(
        suite.get("backend", "statevector"),
        int(suite.get("shots", 8192)),
        suite.get("noise") if isinstance(suite.get("noise"), str) else None,
        suite.get("noise") if isinstance(suite.get("noise"), dict) else None,
    )
    ansatz = _ansatz_from(suite.get("ansatz", "uccsd"), config)
    suite_cfg = SuiteConfig(
        data_dir=Path(suite.get("data_dir", "data")),
        molecules=tuple(suite["molecules"]),
        optimizers=tuple(suite["optimizers"]),
        seeds=tuple(int(s) for s in suite.get("seeds", [0])),
        backend=backend,
        ansatz=ansatz,
        mapping=Mapping.from_name(suite.get("mapping", "parity-reduced")),
        max_iter=int(suite.get("max_iter", 100)),
        grid_stride=int(suite.get("grid_stride", 1)),
        optimizer_options=config.get("optimizer", {}),
        workers=int(suite.get("workers", 0)),
        dipole=suite.get("dipole", "auto"),
        average_runs=int(suite.get("average_runs", 1)),
    )
    verbose = (lambda *_: None) if args.quiet else print
    written = run_suite(suite_cfg, args.out, verbose=verbose)
    if not args.quiet:
        print(f"{len(written)} run records -> {args.out}")
    return 0


def cmd_report(args) -> int:
    records = load_run_records(args.in_dir)
    rows, header = rows_from_records(records, aggregate=args.aggregate)
    header["vqebench"] = __version__
    fmt = "md" if args.format in ("md", "markdown") else "csv"
    unit = "debye" if args.debye else "ea0"
    _write_output(emit_report(rows, fmt, header, dipole_unit=unit), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqebench",
        description="Classical-optimizer benchmarking for variational quantum eigensolvers.",
    )
    parser.add_argument("--version", action="version", version=f"vqebench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hamiltonian", help="map a moldata/FCIDUMP file to a qubit operator")
    p.add_argument("--data", required=True)
    p.add_argument("--mapping", default="parity-reduced",
                   choices=["jw", "parity", "parity-reduced"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_hamiltonian)

    p = sub.add_parser("vqe", help="run one VQE minimization")
    p.add_argument("--data", required=True)
    p.add_argument("--mapping", choices=["jw", "parity", "parity-reduced"])
    p.add_argument("--ansatz", choices=["uccsd", "twolocal"])
    p.add_argument("--optimizer")
    p.add_argument("--backend", choices=["statevector", "sampled"])
    p.add_argument("--shots", type=int)
    p.add_argument("--noise", help="noise profile JSON file")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--config", help="key-value/table config file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_vqe)

    p = sub.add_parser("scan", help="potential-energy-curve scan with one optimizer")
    p.add_argument("--series", required=True, help="directory of moldata JSON fixtures")
    p.add_argument("--mapping", choices=["jw", "parity", "parity-reduced"])
    p.add_argument("--ansatz", choices=["uccsd", "twolocal"])
    p.add_argument("--optimizer")
    p.add_argument("--backend", choices=["statevector", "sampled"])
    p.add_argument("--shots", type=int)
    p.add_argument("--noise")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--stride", type=int)
    p.add_argument("--average-runs", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bench", help="run a benchmark suite from a config file")
    p.add_argument("--suite", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="aggregate persisted runs into a CSV/Markdown table")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--format", default="csv", choices=["csv", "md", "markdown"])
    p.add_argument("--aggregate", default="seeds", choices=["none", "seeds", "optimizer"])
    p.add_argument("--debye", action="store_true", help="report dipole RMSE in debye")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except VqeBenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
