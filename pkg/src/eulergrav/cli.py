"""Command-line front end.

Verbs:
  run           advance one problem and write snapshot files
  steady-check  report the drift of a steady problem after evolution
  converge      grid-refinement error/rate table
  compare       L1/Linf differences between two snapshot files

Settings may come from a ``key=value`` config file (``--config``); any key is
also available as a ``--key=value`` flag that overrides the file.  Exit codes:
0 success, 2 usage error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import problems
from .core import GasParams, SolverError
from .diagnostics import (
    compare_snapshots,
    convergence_study,
    run_problem,
    steady_drift,
    write_snapshot,
)
from .evolution import SolverConfig
from .flux1d import CutoffParams

_KEYS = {
    "problem": str,
    "mode": str,
    "n": str,          # int, or comma list for converge
    "nx": int,
    "ny": int,
    "theta": float,
    "cfl": float,
    "gamma": float,
    "cutoff_c": float,
    "cutoff_m": int,
    "psi_scale": str,
    "t_final": float,
    "eta": float,
    "out_dir": str,
    "snap_times": str,
    "metric": str,
}

_DEFAULTS = {
    "mode": "wb",
    "theta": 1.3,
    "cfl": 0.4,
    "gamma": 1.4,
    "cutoff_c": 200.0,
    "cutoff_m": 6,
    "psi_scale": "local",
    "out_dir": ".",
    "metric": "delta",
}


class UsageError(Exception):
    pass


def parse_config_file(path) -> dict:
    out = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
                key, value = (s.strip() for s in line.split("=", 1))
                if key not in _KEYS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                out[key] = value
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    return out


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    try:
        return _KEYS[key](value)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc


def _settings(args) -> dict:
    """defaults < config file < command-line flags."""
    merged = dict(_DEFAULTS)
    if args.config:
        merged.update(parse_config_file(args.config))
    for key in _KEYS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return {k: _coerce(k, v) for k, v in merged.items()}


def _solver_config(s) -> SolverConfig:
    return SolverConfig(
        mode=s["mode"],
        gas=GasParams(gamma=s["gamma"]),
        theta=s["theta"],
        cutoff=CutoffParams(gain=s["cutoff_c"], exponent=s["cutoff_m"]),
        psi_scale=s["psi_scale"],
    )


def _resolution(s, problem):
    if s.get("nx") is not None or s.get("ny") is not None:
        if problem.dimension != 2:
            raise UsageError("nx/ny apply to 2-D problems only")
        nx = s.get("nx") or problem.nx_default
        ny = s.get("ny") or problem.ny_default
        return (nx, ny)
    if s.get("n") is not None:
        try:
            return int(s["n"])
        except ValueError as exc:
            raise UsageError(f"bad value for n: {s['n']!r}") from exc
    return None


def _get_problem(s):
    if not s.get("problem"):
        raise UsageError("a problem name is required (problem=... or --problem)")
    try:
        return problems.get_problem(s["problem"], eta=s.get("eta"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _snap_times(s):
    raw = s.get("snap_times") or ""
    try:
        return tuple(float(t) for t in raw.replace(";", ",").split(",") if t.strip())
    except ValueError as exc:
        raise UsageError(f"bad snap_times: {raw!r}") from exc


def cmd_run(s) -> int:
    problem = _get_problem(s)
    config = _solver_config(s)
    result = run_problem(
        problem, mode=s["mode"], n=_resolution(s, problem),
        t_final=s.get("t_final"), snap_times=_snap_times(s),
        config=config, cfl=s["cfl"],
    )
    os.makedirs(s["out_dir"], exist_ok=True)
    tag = f"{problem.name}_{s['mode']}"
    for t, state in zip(result.times, result.states):
        path = os.path.join(s["out_dir"], f"{tag}_t{t:.6g}.csv")
        write_snapshot(state, result.grid, result.phi, result.gas, path)
        print(f"wrote {path}")
    print(f"{result.steps} steps to t={result.times[-1]:.6g}")
    return 0


def cmd_steady_check(s) -> int:
    problem = _get_problem(s)
    config = _solver_config(s)
    result = run_problem(
        problem, mode=s["mode"], n=_resolution(s, problem),
        t_final=s.get("t_final"), config=config, cfl=s["cfl"],
    )
    drift = steady_drift(result)
    print(f"drift of {problem.name} ({s['mode']}) after t={result.times[-1]:.6g}, "
          f"{result.steps} steps")
    print("component,l1,linf")
    for comp, d in drift.items():
        print(f"{comp},{d['l1']:.6e},{d['linf']:.6e}")
    return 0


def cmd_converge(s) -> int:
    problem = _get_problem(s)
    config = _solver_config(s)
    if s.get("n") is None:
        raise UsageError("converge needs a comma-separated doubling chain: --n=100,200,400")
    try:
        resolutions = [int(x) for x in str(s["n"]).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad resolution list: {s['n']!r}") from exc
    t_final = s.get("t_final")
    if t_final is None:
        t_final = problem.t_final_default
    try:
        report = convergence_study(problem, s["mode"], resolutions, t_final,
                                   metric=s["metric"], config=config, cfl=s["cfl"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(report.format_table())
    return 0


def cmd_compare(s, file_a, file_b) -> int:
    try:
        diffs = compare_snapshots(file_a, file_b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print("column,l1,linf")
    for name, d in diffs.items():
        print(f"{name},{d['l1']:.6e},{d['linf']:.6e}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulergrav",
        description="Finite-volume solver for compressible flow under gravity",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    flag_help = {"n": "resolution (comma list for converge)"}

    def add_common(p):
        p.add_argument("--config", help="key=value settings file")
        for key, typ in _KEYS.items():
            p.add_argument(f"--{key}", type=str, default=None,
                           help=flag_help.get(key, f"{typ.__name__} setting"))

    for verb in ("run", "steady-check", "converge"):
        add_common(sub.add_parser(verb))
    cp = sub.add_parser("compare")
    cp.add_argument("file_a")
    cp.add_argument("file_b")
    cp.add_argument("--config", help="unused; accepted for symmetry")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        if args.verb == "compare":
            return cmd_compare({}, args.file_a, args.file_b)
        settings = _settings(args)
        if args.verb == "run":
            return cmd_run(settings)
        if args.verb == "steady-check":
            return cmd_steady_check(settings)
        return cmd_converge(settings)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
