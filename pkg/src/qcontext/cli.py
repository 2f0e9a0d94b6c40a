"""Command-line front end: geometry, bounds, qasm, simulate, report."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .circuits import context_circuit, emit_qasm
from .contextuality import analyze
from .geometry import IncidenceConfiguration, build_polar_space, doily, enumerate_planes, quadric
from .pauli import SymplecticPoint
from .report import ReportFormatError, read_rows_csv, summarize
from .simulator import DEFAULT_NOISE, NoiseModel, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_CONSISTENCY = 0, 2, 3


class ConfigError(ValueError):
    pass


class ConsistencyError(RuntimeError):
    pass


def resolve_geometry(selector: str) -> IncidenceConfiguration:
    """doily | grid:<p> | quadric3:<p> | w52, with p an observable label or 0."""
    kind, _, arg = selector.partition(":")
    if kind in ("doily", "w52") and arg:
        raise ConfigError(f"{kind} takes no parameter")
    if kind == "doily":
        return doily()
    if kind == "w52":
        return build_polar_space(3)
    if kind in ("grid", "quadric3"):
        n = 2 if kind == "grid" else 3
        if not arg:
            raise ConfigError(f"{kind} needs a point, e.g. {kind}:0")
        try:
            p = None if arg == "0" else SymplecticPoint.from_label(arg)
            if p is not None and p.n_qubits != n:
                raise ConfigError(f"{arg} is not a {n}-qubit observable")
            return quadric(n, p)
        except ValueError as e:
            raise ConfigError(str(e)) from None
    raise ConfigError(f"unknown geometry selector {selector!r}")


def selector_slug(selector: str) -> str:
    return selector.replace(":", "-")


def geometry_dump(config: IncidenceConfiguration, contexts=None) -> dict:
    contexts = config.contexts if contexts is None else contexts
    return {
        "name": config.name,
        "n_qubits": config.n_qubits,
        "points": [p.label for p in config.points],
        "contexts": [{"labels": list(c.labels), "sign": c.sign, "rank": c.rank} for c in contexts],
        "counts": {
            "points": len(config.points),
            "contexts": len(contexts),
            "positive": sum(1 for c in contexts if c.sign == 1),
            "negative": sum(1 for c in contexts if c.sign == -1),
        },
    }


def geometry_hash(config: IncidenceConfiguration) -> str:
    blob = json.dumps(geometry_dump(config), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _noise(args) -> NoiseModel:
    if args.noiseless:
        return NoiseModel()
    try:
        return NoiseModel(args.noise_p1, args.noise_p2, args.noise_ro)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _selector(args) -> str:
    sel = args.geometry or args.selector
    if not sel:
        raise ConfigError("no geometry selected")
    return sel


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_geometry(args) -> int:
    config = resolve_geometry(_selector(args))
    contexts = list(config.contexts)
    if args.planes:
        if config.n_qubits < 3:
            raise ConfigError("planes exist for three qubits only")
        coords = {p.coords for p in config.points}
        contexts += enumerate_planes(config.n_qubits, coords)
    dump = geometry_dump(config, contexts)
    if args.format == "json":
        _emit(dump)
    else:
        c = dump["counts"]
        print(f"# {dump['name']}: {c['points']} points, {c['contexts']} contexts "
              f"({c['positive']} positive, {c['negative']} negative)")
        for ctx in dump["contexts"]:
            print(f"{'+' if ctx['sign'] == 1 else '-'} {'-'.join(ctx['labels'])}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    config = resolve_geometry(_selector(args))
    a = analyze(config, args.method, args.restarts, args.seed)
    _emit(a.as_dict())
    return EXIT_OK


def write_qasm(config: IncidenceConfiguration, slug: str, outdir: Path) -> dict[str, int]:
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for i, c in enumerate(config.contexts):
        fname = f"{slug}_{i:03d}_{c.name}.qasm"
        (outdir / fname).write_text(emit_qasm(context_circuit(c)))
        manifest[fname] = c.sign
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def cmd_qasm(args) -> int:
    sel = _selector(args)
    config = resolve_geometry(sel)
    manifest = write_qasm(config, selector_slug(sel), Path(args.out))
    _emit({"geometry": sel, "files": len(manifest), "out": str(args.out)})
    return EXIT_OK


def _check_report(report) -> None:
    s = report.summary
    chi = sum(r.sign * r.mean for r in report.rows)
    sig = sum(r.std**2 for r in report.rows) ** 0.5
    if abs(chi - s.chi) > 1e-9 or abs(sig - s.sigma_chi) > 1e-9 or len(report.rows) != s.M:
        raise ConsistencyError("summary does not match its rows")


def cmd_simulate(args) -> int:
    sel = _selector(args)
    config = resolve_geometry(sel)
    if args.shots < 1:
        raise ConfigError("--shots must be >= 1")
    noise = _noise(args)
    if config.n_qubits > 3:
        raise ConfigError("simulation supports at most 3 data qubits")
    report = run_experiment(config, args.input, args.shots, noise, args.seed)
    report.meta = {
        "geometry": sel,
        "geometry_sha256": geometry_hash(config),
        "input": args.input,
        "noise": {"p1": noise.p1, "p2": noise.p2, "p_ro": noise.p_ro},
        "seed": args.seed,
        "shots": args.shots,
        "version": __version__,
    }
    _check_report(report)
    if len(report.rows) != config.M:
        raise ConsistencyError("row count differs from the number of contexts")

    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    name = args.run_name or f"{selector_slug(sel)}_seed{args.seed}_{stamp}"
    run_dir = Path(args.out) / name
    k = 1
    while run_dir.exists() and not args.run_name:
        run_dir = Path(args.out) / f"{name}-{k}"
        k += 1
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "report.csv").write_text(report.to_csv())
    (run_dir / "report.json").write_text(report.to_json())
    (run_dir / "meta.json").write_text(json.dumps(dict(report.meta, timestamp=stamp), indent=2, sort_keys=True) + "\n")
    out = {"run_dir": str(run_dir)}
    out.update(vars(report.summary))
    _emit(out)
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        rows = read_rows_csv(Path(args.csv).read_text())
    except ReportFormatError as e:
        raise ConsistencyError(str(e)) from None
    analysis = None
    sel = args.geometry or args.selector
    if sel:
        config = resolve_geometry(sel)
        if len(rows) != config.M:
            raise ConsistencyError(f"{len(rows)} rows for {config.M} contexts of {config.name}")
        expected = {c.name: c.sign for c in config.contexts}
        for r in rows:
            if expected.get(r.context) != r.sign:
                raise ConsistencyError(f"row {r.context} does not match a context of {config.name} with that sign")
        analysis = analyze(config)
    _emit(vars(summarize(rows, analysis)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcontext", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def geometry_args(p, positional=True):
        if positional:
            p.add_argument("selector", nargs="?", help="doily | grid:<p> | quadric3:<p> | w52")
        p.add_argument("--geometry", help="same as the positional selector")

    p = sub.add_parser("geometry", help="list points and signed contexts")
    geometry_args(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--planes", action="store_true", help="also list Fano planes (three qubits)")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("bounds", help="NCHV and quantum bounds")
    geometry_args(p)
    p.add_argument("--method", choices=("auto", "exhaustive", "heuristic"), default="auto")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("qasm", help="write one OpenQASM 2.0 file per context")
    geometry_args(p)
    p.add_argument("--out", default="qasm")
    p.set_defaults(func=cmd_qasm)

    p = sub.add_parser("simulate", help="simulate every context and report chi")
    geometry_args(p)
    p.add_argument("--shots", type=int, default=8192)
    p.add_argument("--noise-p1", type=float, default=DEFAULT_NOISE.p1)
    p.add_argument("--noise-p2", type=float, default=DEFAULT_NOISE.p2)
    p.add_argument("--noise-ro", type=float, default=DEFAULT_NOISE.p_ro)
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--input", choices=("zero", "random"), default="zero")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="runs")
    p.add_argument("--run-name", help="fixed run directory name instead of a timestamp")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="recompute the summary from a rows CSV")
    p.add_argument("csv")
    p.add_argument("selector", nargs="?")
    p.add_argument("--geometry")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ConsistencyError as e:
        print(f"consistency failure: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
