"""``simulate`` command line: run, sweep, list-scenarios.

Values are resolved as defaults < config file (flat JSON) < flags, and the
origin of each one is stored in the run manifest. Exit codes: 0 success,
2 usage error, 3 Newton failure, 4 CFL violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .driver import RunConfig, RunStatus, standard_config, run, run_epsilon_sweep, sweep_report
from .grid import Boundary, new_uniform_grid
from .hyperbolic import OUTER_DIVERGENCE, NewtonConfig
from .pressure import PressureParams
from .scenarios import DESCRIPTIONS, STANDARD_CASES, get_scenario

EXIT_OK, EXIT_USAGE, EXIT_NEWTON, EXIT_CFL = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid comma-separated number list: {text!r}") from None


# name -> (type, flag); flags use dashes, config-file keys use underscores
_FIELDS = {
    "epsilon": float,
    "alpha": float,
    "beta": float,
    "gamma": float,
    "mu": float,
    "sigma": float,
    "dt": float,
    "t_end": float,
    "n_cells": int,
    "length": float,
    "boundary": str,
    "snapshot_times": _float_list,
    "velocity_floor": float,
    "newton_tolerance": float,
    "newton_max_iterations": int,
    "newton_fd_step": float,
    "newton_damping": float,
    "cfl_policy": str,
    "outer_divergence": str,
    "output_dir": str,
}
_CHOICES = {
    "boundary": [b.value for b in Boundary],
    "cfl_policy": ["abort", "warn"],
    "outer_divergence": list(OUTER_DIVERGENCE),
}


@dataclass
class CliInvocation:
    subcommand: str
    scenario: str | None = None
    config: RunConfig | None = None
    output_dir: Path | None = None
    epsilons: list = field(default_factory=list)
    workers: int = 1
    provenance: dict = field(default_factory=dict)


def _defaults(scenario: str) -> dict:
    cfg = standard_config(scenario)
    d = io.config_dict(cfg)
    d.pop("scenario")
    d.pop("newton_mass_tolerance")
    d["output_dir"] = f"out/{scenario}"
    return d


def _load_config_file(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a flat JSON object")
    data.pop("scenario", None)
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise UsageError(f"unknown key {unknown[0]!r} in config file {path}")
    out = {}
    for key, value in data.items():
        conv = _FIELDS[key]
        try:
            if conv is _float_list:
                out[key] = [float(v) for v in (value if isinstance(value, list) else value.split(","))]
            else:
                out[key] = conv(value)
        except (TypeError, ValueError, AttributeError):
            raise UsageError(f"bad value {value!r} for {key!r} in config file {path}") from None
        if key in _CHOICES and out[key] not in _CHOICES[key]:
            raise UsageError(f"bad value {value!r} for {key!r}; choose from {_CHOICES[key]}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate", description="1D congested crowd flow with transported maximal density."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("scenario", choices=STANDARD_CASES, help="test case")
        p.add_argument("--config", help="flat JSON file with run settings")
        for name, conv in _FIELDS.items():
            flag = "--" + name.replace("_", "-")
            kw = dict(default=None, dest=name)
            if conv is _float_list:
                kw.update(type=_float_list, metavar="T1,T2,...")
            else:
                kw.update(type=conv)
            if name in _CHOICES:
                kw["choices"] = _CHOICES[name]
            p.add_argument(flag, **kw)

    common(sub.add_parser("run", help="run one simulation"))
    sw = sub.add_parser("sweep", help="repeat a run for several epsilon values")
    common(sw)
    sw.add_argument("--epsilons", type=_float_list, default=[1e-2, 1e-4, 1e-6], metavar="E1,E2,...")
    sw.add_argument("--workers", type=int, default=1, help="parallel processes")
    sub.add_parser("list-scenarios", help="print the available test cases")
    return parser


def _resolve(args) -> CliInvocation:
    values = _defaults(args.scenario)
    provenance = {k: "default" for k in values}
    if args.config:
        for k, v in _load_config_file(args.config).items():
            values[k] = v
            provenance[k] = "file"
    for k in _FIELDS:
        v = getattr(args, k)
        if v is not None:
            values[k] = v
            provenance[k] = "flag"
    if provenance["t_end"] != "default" and provenance["snapshot_times"] == "default":
        kept = {t for t in values["snapshot_times"] if t <= values["t_end"]}
        values["snapshot_times"] = sorted(kept | {values["t_end"]})
    try:
        config = RunConfig(
            scenario=get_scenario(args.scenario),
            grid=new_uniform_grid(values["length"], values["n_cells"], values["boundary"]),
            dt=values["dt"],
            t_end=values["t_end"],
            params=PressureParams(values["epsilon"], values["alpha"], values["beta"], values["gamma"]),
            mu=values["mu"],
            sigma=values["sigma"],
            newton=NewtonConfig(
                tolerance=values["newton_tolerance"],
                max_iterations=values["newton_max_iterations"],
                fd_step=values["newton_fd_step"],
                damping=values["newton_damping"],
            ),
            snapshot_times=tuple(values["snapshot_times"]),
            velocity_floor=values["velocity_floor"],
            cfl_policy=values["cfl_policy"],
            outer_divergence=values["outer_divergence"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    inv = CliInvocation(
        subcommand=args.subcommand,
        scenario=args.scenario,
        config=config,
        output_dir=Path(values["output_dir"]),
        provenance=provenance,
    )
    if args.subcommand == "sweep":
        if not args.epsilons or any(e <= 0 for e in args.epsilons):
            raise UsageError(f"--epsilons must be positive numbers, got {args.epsilons}")
        inv.epsilons = args.epsilons
        inv.workers = args.workers
        inv.provenance["epsilons"] = "flag"
    return inv


def parse_invocation(argv) -> CliInvocation:
    """Parse ``argv`` into a fully resolved invocation.

    argparse reports unknown flags and bad values itself (exit code 2);
    problems found while resolving raise UsageError.
    """
    args = build_parser().parse_args(argv)
    if args.subcommand == "list-scenarios":
        return CliInvocation(subcommand="list-scenarios")
    return _resolve(args)


def _exit_code(status: RunStatus) -> int:
    return {
        RunStatus.COMPLETED: EXIT_OK,
        RunStatus.NEWTON_FAILURE: EXIT_NEWTON,
        RunStatus.CFL_VIOLATION: EXIT_CFL,
    }[status]


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    verbose = "-v" in argv or "--verbose" in argv
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format="%(levelname)s %(message)s")
    try:
        inv = parse_invocation(argv)
    except UsageError as exc:
        print(f"simulate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if inv.subcommand == "list-scenarios":
        for name in STANDARD_CASES:
            print(f"{name}\t{DESCRIPTIONS[name]}")
        return EXIT_OK

    if inv.subcommand == "run":
        result = run(inv.config)
        io.write_run(result, inv.output_dir, inv.provenance)
        last = result.diagnostics[-1]
        print(
            f"{inv.scenario}: {result.status.value} at t={last.time:.6g}, "
            f"mass={last.total_mass:.15g}, max Z={max(d.max_Z for d in result.diagnostics):.12g} "
            f"-> {inv.output_dir}"
        )
        if result.message:
            print(result.message, file=sys.stderr)
        return _exit_code(result.status)

    results = run_epsilon_sweep(inv.config, inv.epsilons, max_workers=inv.workers)
    codes = []
    for res in results:
        tag = io.epsilon_tag(res.epsilon)
        io.write_run(res, inv.output_dir / tag, inv.provenance, diagnostics_name=f"diagnostics_{tag}.csv")
        codes.append(_exit_code(res.status))
        print(f"{tag}: {res.status.value} {res.message}".rstrip())
    report = sweep_report(results)
    for row in report:
        row.pop("max_Z_series")
    io.write_json(
        {**io.manifest(inv.config, inv.provenance), "epsilons": inv.epsilons, "runs": report},
        inv.output_dir / "sweep_report.json",
    )
    failures = [c for c in codes if c]
    return min(failures) if failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
