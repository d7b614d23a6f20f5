"""Command-line front end: ``tbgeo verify``, ``tbgeo sweep``, ``tbgeo geodesic``.

Config files are flat ``key = value`` text; ``#`` starts a comment, lists are
comma-separated and several weight triples are separated by ``;``. Exit
status is 0 when everything passes, 1 on a failed check or excessive energy
drift, 2 on usage or config errors.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import verify as vf
from .bundle import validate_weights
from .exceptions import ConfigError, TbgeoError
from .geodesic import DRIFT_TOL, integrate_geodesic
from .so3 import exp_so3

COMMANDS = ("verify", "sweep", "geodesic")
DEFAULT_GRID = {
    "m1_grid": (0.5, 1.0, 1.5, 2.0, 3.0),
    "m2_grid": (-1.0, -0.5, 0.0, 0.5, 1.0),
    "m3_grid": (0.5, 1.0, 1.5, 2.0, 3.0),
}

_KEYS = {
    "command", "manifold", "checks", "weights", "tolerance", "seed", "sample_count",
    "out", "jobs", "m1_grid", "m2_grid", "m3_grid", "rotation", "rotation_vector",
    "omega", "zeta", "eta", "duration", "step", "integrator",
}


@dataclass
class RunConfig:
    command: str
    manifold: str = None
    checks: tuple = None
    weights: list = None
    tolerance: float = None
    seed: int = 0
    sample_count: int = None
    out: str = None
    jobs: int = None
    m1_grid: tuple = DEFAULT_GRID["m1_grid"]
    m2_grid: tuple = DEFAULT_GRID["m2_grid"]
    m3_grid: tuple = DEFAULT_GRID["m3_grid"]
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    omega: tuple = (0.0, 0.0, 0.0)
    zeta: tuple = (0.0, 0.0, 0.0)
    eta: tuple = (0.0, 0.0, 0.0)
    duration: float = 10.0
    step: float = 1e-3
    integrator: str = "rk4"

    def echo(self):
        out = {
            "command": self.command,
            "manifold": self.manifold,
            "checks": list(self.checks) if self.checks else None,
            "weights": [list(w.as_tuple()) for w in self.weights] if self.weights else None,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "sample_count": self.sample_count,
        }
        if self.command == "sweep":
            out.update({k: list(getattr(self, k)) for k in DEFAULT_GRID})
        if self.command == "geodesic":
            out.update(
                rotation=np.asarray(self.rotation).tolist(),
                omega=list(self.omega), zeta=list(self.zeta), eta=list(self.eta),
                duration=self.duration, step=self.step, integrator=self.integrator,
            )
        return out


def parse_config_text(text):
    """``key = value`` lines into a dict of raw strings."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def _floats(value, key, n=None):
    try:
        vals = tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated numbers, got {value!r}") from None
    if n is not None and len(vals) != n:
        raise ConfigError(f"{key}: expected {n} numbers, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{key}: values must be finite")
    return vals


def _scalar(value, key, kind):
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {value!r}") from None


def build_config(command, entries):
    """Typed, validated :class:`RunConfig`; inadmissible weights raise here."""
    if "command" in entries and entries["command"] != command:
        raise ConfigError(f"config is for {entries['command']!r}, not {command!r}")
    cfg = RunConfig(command)
    if "manifold" in entries:
        cfg.manifold = entries["manifold"]
        vf.make_manifold(cfg.manifold)
    if "checks" in entries:
        cfg.checks = tuple(c.strip() for c in entries["checks"].split(",") if c.strip())
        unknown = set(cfg.checks) - set(vf.CHECKS)
        if unknown:
            raise ConfigError(f"unknown checks: {sorted(unknown)}")
    if "weights" in entries:
        triples = [t for t in entries["weights"].split(";") if t.strip()]
        cfg.weights = [validate_weights(*_floats(t, "weights", 3)) for t in triples]
    for key, kind in (("tolerance", float), ("seed", int), ("sample_count", int), ("jobs", int),
                      ("duration", float), ("step", float)):
        if key in entries:
            setattr(cfg, key, _scalar(entries[key], key, kind))
    if cfg.sample_count is not None and cfg.sample_count < 1:
        raise ConfigError("sample_count must be at least 1")
    if cfg.tolerance is not None and not cfg.tolerance >= 0:
        raise ConfigError("tolerance must be non-negative")
    for key in DEFAULT_GRID:
        if key in entries:
            setattr(cfg, key, _floats(entries[key], key))
    cfg.out = entries.get("out")
    if "rotation" in entries and "rotation_vector" in entries:
        raise ConfigError("give either rotation or rotation_vector, not both")
    if "rotation" in entries:
        cfg.rotation = np.array(_floats(entries["rotation"], "rotation", 9)).reshape(3, 3)
    if "rotation_vector" in entries:
        cfg.rotation = exp_so3(_floats(entries["rotation_vector"], "rotation_vector", 3))
    for key in ("omega", "zeta", "eta"):
        if key in entries:
            setattr(cfg, key, _floats(entries[key], key, 3))
    if "integrator" in entries:
        cfg.integrator = entries["integrator"]
        if cfg.integrator != "rk4":
            raise ConfigError("only the rk4 integrator is available")
    if command == "geodesic":
        if cfg.manifold not in (None, "so3"):
            raise ConfigError("geodesic runs only on so3")
        if not cfg.step > 0:
            raise ConfigError("step size must be positive")
        if cfg.weights is not None and len(cfg.weights) != 1:
            raise ConfigError("geodesic takes exactly one weight triple")
    return cfg


def load_config(command, path=None, overrides=None):
    entries = {}
    if path is not None:
        try:
            with open(path) as fh:
                entries = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    for key, value in (overrides or {}).items():
        if value is not None:
            entries[key] = str(value)
    return build_config(command, entries)


def _weights_arg(cfg):
    if not cfg.weights:
        return None
    return cfg.weights[0] if len(cfg.weights) == 1 else list(cfg.weights)


def _document(cfg, reports, **extra_summary):
    summary = vf.summarize(reports)
    summary.update(extra_summary)
    return {
        "config": cfg.echo(),
        "checks": [r.to_dict() for r in reports],
        "summary": summary,
        "metadata": {"tool_version": __version__},
    }


def run_verify(cfg):
    specs = vf.default_suite(
        cfg.seed, _weights_arg(cfg), cfg.tolerance, cfg.manifold, cfg.checks, cfg.sample_count
    )
    if not specs:
        raise ConfigError("no checks selected")
    reports = vf.run_suite(specs, jobs=cfg.jobs or 1)
    return _document(cfg, reports)


def run_sweep(cfg):
    """Every selected check at every admissible grid cell; rejected cells are recorded."""
    cells, rejected = vf.weight_grid(cfg.m1_grid, cfg.m2_grid, cfg.m3_grid)
    count = cfg.sample_count or 3
    specs = []
    for w in cells:
        specs.extend(vf.default_suite(cfg.seed, w, cfg.tolerance, cfg.manifold, cfg.checks, count))
    jobs = cfg.jobs if cfg.jobs is not None else min(4, os.cpu_count() or 1)
    reports = vf.run_suite(specs, jobs=jobs)
    return _document(cfg, reports, cells_run=len(cells), skipped_cells=rejected)


def run_geodesic(cfg):
    w = cfg.weights[0] if cfg.weights else validate_weights(1.0, 0.0, 1.0)
    traj = integrate_geodesic(w, cfg.rotation, cfg.omega, cfg.zeta, cfg.eta, cfg.duration, cfg.step)
    drift = float(traj.relative_energy_drift)
    summary = {
        "pass": drift <= DRIFT_TOL,
        "relative_energy_drift": drift,
        "drift_tolerance": DRIFT_TOL,
        "samples": len(traj.times),
    }
    return traj, summary


def _write_json(doc, path):
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="tbgeo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tbgeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run the certification checks and write a JSON report"),
        ("sweep", "run the checks over a grid of metric weights"),
        ("geodesic", "integrate a geodesic on TSO(3) and write a CSV trajectory"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--tol", type=float, dest="tolerance", help="override check tolerances")
        p.add_argument("--out", help="output path ('-' or omitted: stdout for reports)")
        if name != "geodesic":
            p.add_argument("--jobs", type=int, help="worker processes")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    overrides = {"seed": args.seed, "tolerance": args.tolerance, "out": args.out,
                 "jobs": getattr(args, "jobs", None)}
    try:
        cfg = load_config(args.command, args.config, overrides)
        if cfg.command == "geodesic":
            traj, summary = run_geodesic(cfg)
            traj.write_csv(cfg.out or "trajectory.csv")
            sys.stdout.write(json.dumps(summary) + "\n")
            if not summary["pass"]:
                print(f"energy drift {summary['relative_energy_drift']:.3e} exceeds {DRIFT_TOL:g}",
                      file=sys.stderr)
            return 0 if summary["pass"] else 1
        doc = run_verify(cfg) if cfg.command == "verify" else run_sweep(cfg)
        _write_json(doc, cfg.out)
        return 0 if doc["summary"]["pass"] else 1
    except (TbgeoError, ValueError) as exc:
        print(f"tbgeo: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
