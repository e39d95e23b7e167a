"""CSV and JSON output of snapshots, diagnostics and run manifests.

Numbers are written with 17 significant digits so that reading a file back
reproduces every double exactly, and no wall-clock data is recorded, so
identical runs give byte-identical files.
"""
from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import kernels

SNAPSHOT_COLUMNS = ("x", "rho", "u", "rho_star", "pi", "Z")
DIAGNOSTIC_COLUMNS = (
    "time",
    "total_mass",
    "total_energy",
    "max_Z",
    "rho_star_min",
    "rho_star_max",
    "newton_iterations",
    "max_wave_speed",
    "cfl_ok",
)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % v


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if callable(obj):
        return getattr(obj, "__qualname__", repr(obj))
    return obj


def config_dict(config) -> dict:
    """Flat, JSON-ready description of a RunConfig."""
    g, p, n = config.grid, config.params, config.newton
    return {
        "scenario": config.scenario.name,
        "length": g.length,
        "n_cells": g.n_cells,
        "boundary": g.boundary.value,
        "dt": config.dt,
        "t_end": config.t_end,
        "epsilon": p.epsilon,
        "alpha": p.alpha,
        "beta": p.beta,
        "gamma": p.gamma,
        "mu": config.mu,
        "sigma": config.sigma,
        "snapshot_times": list(config.snapshot_times),
        "velocity_floor": config.velocity_floor,
        "newton_tolerance": n.tolerance,
        "newton_max_iterations": n.max_iterations,
        "newton_fd_step": n.fd_step,
        "newton_damping": n.damping,
        "newton_mass_tolerance": n.mass_tolerance,
        "cfl_policy": config.cfl_policy,
        "outer_divergence": config.outer_divergence,
    }


def manifest(config, provenance=None, extra=None) -> dict:
    from . import __version__

    out = {
        "code": {"package": "congestion1d", "version": __version__, "backend": kernels.BACKEND},
        "config": config_dict(config),
    }
    if provenance is not None:
        out["provenance"] = dict(sorted(provenance.items()))
    if extra:
        out.update(_jsonable(extra))
    return out


def write_json(obj, path) -> Path:
    path = Path(path)
    _write(path, json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def write_snapshot(snapshot, path, sidecar: dict | None = None) -> Path:
    """Write ``x,rho,u,rho_star,pi,Z`` per cell; ``sidecar`` goes to ``<path>.json``."""
    path = Path(path)
    cols = [snapshot.x, snapshot.rho, snapshot.u, snapshot.rho_star, snapshot.pi, snapshot.Z]
    lines = [",".join(SNAPSHOT_COLUMNS)]
    lines += [",".join(_fmt(v) for v in row) for row in zip(*cols)]
    _write(path, "\n".join(lines) + "\n")
    if sidecar is not None:
        meta = dict(sidecar)
        meta["time"] = snapshot.time
        write_json(meta, path.with_suffix(".json"))
    return path


def read_snapshot(path) -> dict:
    """Read a snapshot CSV back into a dict of column arrays."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, k] for k, name in enumerate(SNAPSHOT_COLUMNS)}


def write_diagnostics(records, path) -> Path:
    path = Path(path)
    lines = [",".join(DIAGNOSTIC_COLUMNS)]
    for r in records:
        lines.append(",".join(_fmt(getattr(r, c)) for c in DIAGNOSTIC_COLUMNS))
    _write(path, "\n".join(lines) + "\n")
    return path


def snapshot_filename(time: float) -> str:
    return f"snapshot_t{time:.6f}.csv"


def epsilon_tag(epsilon: float) -> str:
    return f"eps_{epsilon:g}"


def write_run(result, out_dir, provenance=None, diagnostics_name="diagnostics.csv") -> Path:
    """Write manifest, diagnostics and all snapshots of one run into ``out_dir``."""
    out_dir = Path(out_dir)
    meta = manifest(result.config, provenance)
    status = {"status": result.status.value, "message": result.message}
    write_json({**meta, **status}, out_dir / "manifest.json")
    write_diagnostics(result.diagnostics, out_dir / diagnostics_name)
    for snap in result.snapshots:
        write_snapshot(snap, out_dir / snapshot_filename(snap.time), sidecar=meta)
    return out_dir
