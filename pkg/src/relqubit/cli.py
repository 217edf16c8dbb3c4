"""Partition entanglement of relativistic qubit states under Lorentz boosts.

Exit codes: 0 ok, 2 usage or input error, 3 numerical invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import harness
from . import lorentz as lz
from .density import PartitionSpec, all_factors, state_entropies
from .errors import InvalidArgumentError, NumericalDegradationError
from .specfile import SpecError, load_state, parse_friis_option, parse_keyvals
from .state import StateVector, boost_state

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return f"{x:.17g}"


@dataclass
class RunConfig:
    command: str
    state: StateVector
    boost: lz.LorentzTransform | None = None
    axis: np.ndarray | None = None
    partitions: list[PartitionSpec] = field(default_factory=list)
    samples: int = 200
    seed: int = 0
    max_rapidity: float = 3.0
    tol: float = harness.DEFAULT_TOL
    rapidities: list[float] = field(default_factory=list)
    out: Path | None = None
    fmt: str | None = None  # None: aligned text (csv for sweep)


def parse_axis(text: str) -> np.ndarray:
    text = text.strip()
    if text.lower() in lz.AXES:
        return lz.unit_axis(text)
    parts = text.strip("<>()[]").split(",")
    try:
        v = np.array([float(p) for p in parts])
    except ValueError:
        raise SpecError(f"bad axis {text!r}") from None
    if v.shape != (3,) or not np.all(np.isfinite(v)) or np.linalg.norm(v) == 0:
        raise SpecError(f"axis must be x, y, z or a nonzero <nx,ny,nz>, got {text!r}")
    return v / np.linalg.norm(v)


def parse_boost(text: str) -> tuple[np.ndarray, float | None]:
    kv = parse_keyvals(text)
    unknown = set(kv) - {"axis", "rapidity"}
    if unknown or "axis" not in kv:
        raise SpecError(f"--boost wants axis=...,rapidity=..., got {text!r}")
    rapidity = None
    if "rapidity" in kv:
        try:
            rapidity = float(kv["rapidity"])
        except ValueError:
            raise SpecError(f"bad rapidity {kv['rapidity']!r}") from None
        if not math.isfinite(rapidity):
            raise SpecError("rapidity must be finite")
    return parse_axis(kv["axis"]), rapidity


def parse_grid(text: str) -> list[float]:
    """``0,0.5,1`` or ``start:stop:count``."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return [float(x) for x in np.linspace(float(start), float(stop), int(num))]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise SpecError(f"bad rapidity grid {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", metavar="PATH", help="JSON state specification")
    src.add_argument("--friis", metavar="alpha=..,beta=..,pz=..,mass=..", help="Friis two-particle state")
    common.add_argument("--partition", action="append", default=[], metavar="SELECTOR",
                        help="p<k>.spin, p<k>.mom, particle<k>, comma-joined; repeatable")
    common.add_argument("--out", type=Path, help="write results here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    parser = argparse.ArgumentParser(prog="relqubit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common], help="partition entropies of a (boosted) state")
    p.add_argument("--boost", metavar="axis=..,rapidity=..")

    p = sub.add_parser("scan", parents=[common], help="random-boost invariance scan")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rapidity", type=float, default=3.0)
    p.add_argument("--tol", type=float, default=harness.DEFAULT_TOL)

    p = sub.add_parser("sweep", parents=[common], help="entropies along a rapidity grid")
    p.add_argument("--boost", metavar="axis=..", required=True, help="boost direction (rapidity ignored)")
    p.add_argument("--rapidities", metavar="GRID", required=True, help="0,0.5,1 or start:stop:count")

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    state = load_state(args.state) if args.state else parse_friis_option(args.friis)
    partitions = [PartitionSpec.parse(sel) for sel in args.partition]
    if not partitions:
        partitions = [PartitionSpec.of(f) for f in all_factors(state.particle_count)]
    for part in partitions:
        if max(f.particle for f in part.keep) >= state.particle_count:
            raise SpecError(f"partition {part} names a particle the state does not have")
    cfg = RunConfig(args.command, state, partitions=partitions, out=args.out)
    cfg.fmt = args.format
    if cfg.fmt is None and args.out is not None and args.out.suffix in (".csv", ".json"):
        cfg.fmt = args.out.suffix[1:]
    if args.command == "entropy" and args.boost:
        axis, rapidity = parse_boost(args.boost)
        if rapidity is None:
            raise SpecError("--boost needs a rapidity for this command")
        cfg.boost = lz.boost_along_axis(axis, rapidity)
    if args.command == "scan":
        if args.samples < 1:
            raise SpecError(f"--samples must be at least 1, got {args.samples}")
        if not args.max_rapidity > 0:
            raise SpecError("--max-rapidity must be positive")
        cfg.samples, cfg.seed, cfg.max_rapidity, cfg.tol = args.samples, args.seed, args.max_rapidity, args.tol
    if args.command == "sweep":
        cfg.axis, _ = parse_boost(args.boost)
        cfg.rapidities = parse_grid(args.rapidities)
        if not cfg.rapidities:
            raise SpecError("rapidity grid is empty")
    return cfg


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _json(doc) -> str:
    # Python's float repr is shortest round-trip, so JSON values re-read exactly.
    return json.dumps(doc, indent=2) + "\n"


def cmd_entropy(cfg: RunConfig) -> int:
    state = boost_state(cfg.state, cfg.boost) if cfg.boost is not None else cfg.state
    report = state_entropies(state, cfg.partitions)
    if cfg.fmt is None:
        width = max(len(str(p)) for p in cfg.partitions + ["sum"])
        lines = [f"{str(p):<{width}s}  {fmt(e)}" for p, e in zip(cfg.partitions, report.entropies)]
        lines.append(f"{'sum':<{width}s}  {fmt(report.total)}")
        _emit(cfg, "\n".join(lines) + "\n")
    elif cfg.fmt == "csv":
        rows = [(str(p), e) for p, e in zip(cfg.partitions, report.entropies)] + [("sum", report.total)]
        _emit(cfg, _csv(["partition", "entropy"], rows))
    else:
        _emit(cfg, _json(report.as_dict()))
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    reports = harness.scan_partitions(
        cfg.state, cfg.partitions, cfg.samples, cfg.max_rapidity, cfg.tol, cfg.seed
    )
    if cfg.fmt is None:
        width = max(len(str(r.partition)) for r in reports)
        lines = [f"{'partition':<{width}s}  {'baseline':>24s}  {'max|dE|':>24s}  verdict"]
        lines += [
            f"{str(r.partition):<{width}s}  {fmt(r.baseline):>24s}  {fmt(r.max_deviation):>24s}  {r.verdict}"
            for r in reports
        ]
        _emit(cfg, "\n".join(lines) + "\n")
    elif cfg.fmt == "csv":
        rows = [(str(r.partition), r.samples, r.baseline, r.max_deviation, r.tolerance, r.verdict) for r in reports]
        _emit(cfg, _csv(["partition", "samples", "baseline", "max_deviation", "tolerance", "verdict"], rows))
    else:
        _emit(cfg, _json({"seed": cfg.seed, "max_rapidity": cfg.max_rapidity,
                          "scans": [r.as_dict() for r in reports]}))
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    table = harness.entropy_sweep(cfg.state, cfg.axis, cfg.rapidities, cfg.partitions)
    if cfg.fmt == "json":
        _emit(cfg, _json({"columns": list(table.columns), "rows": [list(r) for r in table.rows]}))
    else:
        _emit(cfg, _csv(table.columns, table.rows))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = harness.verify_suite(seed=args.seed, samples=args.samples)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


COMMANDS = {"entropy": cmd_entropy, "scan": cmd_scan, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            if args.samples < 1:
                raise SpecError("--samples must be at least 1")
            return cmd_verify(args)
        cfg = make_config(args)
        return COMMANDS[args.command](cfg)
    except NumericalDegradationError as exc:
        print(f"relqubit: numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidArgumentError, OSError) as exc:
        print(f"relqubit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
