"""Error norms, grid restriction, convergence studies and snapshot files."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConservedState1D, ConservedState2D, GasParams, Grid1D, Grid2D
from .evolution import RunResult, SolverConfig, TimeControls, run


def cell_volume(grid) -> float:
    return grid.dy if isinstance(grid, Grid1D) else grid.dx * grid.dy


def l1_error(field_a, field_b, grid) -> float:
    """Volume-weighted L1 distance over interior cells."""
    a = np.asarray(field_a, float)
    b = np.asarray(field_b, float)
    if a.shape != b.shape:
        raise ValueError(f"mismatched extents {a.shape} vs {b.shape}")
    return float(np.sum(np.abs(a - b)) * cell_volume(grid))


def linf_error(field_a, field_b) -> float:
    a = np.asarray(field_a, float)
    b = np.asarray(field_b, float)
    if a.shape != b.shape:
        raise ValueError(f"mismatched extents {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b)))


def restrict_fine_to_coarse(field, fine_grid, coarse_grid):
    """Exact cell-average restriction; the fine resolution must be an integer
    multiple of the coarse one on the same domain."""
    field = np.asarray(field, float)
    if isinstance(fine_grid, Grid1D):
        if (fine_grid.y_left, fine_grid.y_right) != (coarse_grid.y_left, coarse_grid.y_right):
            raise ValueError("grids cover different domains")
        if fine_grid.n_cells % coarse_grid.n_cells:
            raise ValueError("fine resolution is not a multiple of the coarse one")
        f = fine_grid.n_cells // coarse_grid.n_cells
        return field.reshape(coarse_grid.n_cells, f).mean(axis=1)
    if (fine_grid.x_left, fine_grid.x_right, fine_grid.y_left, fine_grid.y_right) != (
        coarse_grid.x_left, coarse_grid.x_right, coarse_grid.y_left, coarse_grid.y_right
    ):
        raise ValueError("grids cover different domains")
    if fine_grid.nx % coarse_grid.nx or fine_grid.ny % coarse_grid.ny:
        raise ValueError("fine resolution is not a multiple of the coarse one")
    fx = fine_grid.nx // coarse_grid.nx
    fy = fine_grid.ny // coarse_grid.ny
    return field.reshape(coarse_grid.nx, fx, coarse_grid.ny, fy).mean(axis=(1, 3))


def report_fields(state, phi, gas: GasParams) -> dict:
    """Named physical fields used in error reports and snapshots.

    The energy column is the fluid energy (potential part removed) so that it
    matches plotted/tabulated quantities.
    """
    if isinstance(state, ConservedState1D):
        rho = state.rho
        v = state.mom / rho
        E = state.etot - rho * phi.phi_center_interior
        p = (gas.gamma - 1.0) * (E - 0.5 * rho * v**2)
        return {"rho": rho, "mom": state.mom, "v": v, "p": p, "energy": E}
    rho = state.rho
    u = state.mom_x / rho
    v = state.mom_y / rho
    E = state.etot - rho * phi.phi_center_interior
    p = (gas.gamma - 1.0) * (E - 0.5 * rho * (u**2 + v**2))
    return {"rho": rho, "mom_x": state.mom_x, "mom_y": state.mom_y,
            "u": u, "v": v, "p": p, "energy": E}


_REPORT_COMPONENTS_1D = ("rho", "mom", "energy")
_REPORT_COMPONENTS_2D = ("rho", "mom_x", "mom_y", "energy")


def run_problem(problem, mode: str = "wb", n=None, t_final: float | None = None,
                snap_times=None, config: SolverConfig | None = None,
                cfl: float = 0.4, max_steps: int = 5_000_000) -> RunResult:
    """Convenience wrapper building the config/controls for one simulation."""
    if config is None:
        config = SolverConfig(mode=mode)
    elif config.mode != mode:
        raise ValueError("mode argument disagrees with config.mode")
    controls = TimeControls(
        t_final=problem.t_final_default if t_final is None else t_final,
        cfl=cfl, max_steps=max_steps,
    )
    return run(problem, config=config, controls=controls, n=n, snap_times=snap_times)


def steady_drift(result: RunResult) -> dict:
    """Per-component L1 and max-norm drift of the final state from the initial one."""
    f0 = report_fields(result.initial, result.phi, result.gas)
    f1 = report_fields(result.final, result.phi, result.gas)
    comps = _REPORT_COMPONENTS_1D if isinstance(result.initial, ConservedState1D) \
        else _REPORT_COMPONENTS_2D
    out = {}
    for c in comps + ("p",):
        out[c] = {
            "l1": l1_error(f1[c], f0[c], result.grid),
            "linf": linf_error(f1[c], f0[c]),
        }
    return out


@dataclass
class ErrorReport:
    """Per-resolution L1 errors and experimental convergence rates.

    ``errors[c]`` is a list aligned with ``error_resolutions``; ``rates[c]``
    aligns with ``rate_resolutions`` (rates are defined between consecutive
    doubled resolutions).
    """

    metric: str
    resolutions: list
    error_resolutions: list
    rates_resolutions: list
    errors: dict
    rates: dict

    def format_table(self, sep: str = ",") -> str:
        comps = list(self.errors)
        lines = [sep.join(["N"] + [f"{c}_err{sep}{c}_rate" for c in comps])]
        for i, n in enumerate(self.error_resolutions):
            row = [str(n)]
            for c in comps:
                err = f"{self.errors[c][i]:.6e}"
                if n in self.rates_resolutions:
                    j = self.rates_resolutions.index(n)
                    row += [err, f"{self.rates[c][j]:.3f}"]
                else:
                    row += [err, "-"]
            lines.append(sep.join(row))
        return "\n".join(lines)


def _validate_chain(resolutions):
    res = [int(n) for n in resolutions]
    if len(res) < 2:
        raise ValueError("need at least two resolutions")
    for a, b in zip(res, res[1:]):
        if b != 2 * a:
            raise ValueError("resolutions must form a doubling chain")
    return res


def convergence_study(problem, mode: str, resolutions, t_final: float,
                      metric: str = "delta", config: SolverConfig | None = None,
                      cfl: float = 0.4) -> ErrorReport:
    """Grid-refinement study on one problem.

    metric:
      * ``"drift"``: per-resolution L1 distance of the final state from the
        initial one (steady-state error).
      * ``"delta"``: self-convergence of the change q(T) - q(0), comparing each
        resolution against the restriction of the next finer one.  Comparing
        changes rather than raw fields cancels the O(h^2) difference between
        the discrete initial states on different grids.
      * ``"final"``: self-convergence of the raw final fields.
    """
    if metric not in ("drift", "delta", "final"):
        raise ValueError("metric must be 'drift', 'delta' or 'final'")
    res = _validate_chain(resolutions)
    comps = _REPORT_COMPONENTS_1D if problem.dimension == 1 else _REPORT_COMPONENTS_2D

    runs = {}
    for n in res:
        r = run_problem(problem, mode=mode, n=n, t_final=t_final, config=config, cfl=cfl)
        f0 = report_fields(r.initial, r.phi, r.gas)
        f1 = report_fields(r.final, r.phi, r.gas)
        runs[n] = (r.grid, f0, f1)

    errors = {c: [] for c in comps}
    if metric == "drift":
        err_res = res
        for n in res:
            grid, f0, f1 = runs[n]
            for c in comps:
                errors[c].append(l1_error(f1[c], f0[c], grid))
    else:
        err_res = res[:-1]
        for n in err_res:
            grid, f0, f1 = runs[n]
            grid_f, f0f, f1f = runs[2 * n]
            for c in comps:
                coarse = f1[c] - f0[c] if metric == "delta" else f1[c]
                fine = f1f[c] - f0f[c] if metric == "delta" else f1f[c]
                errors[c].append(
                    l1_error(coarse, restrict_fine_to_coarse(fine, grid_f, grid), grid)
                )

    rate_res = err_res[1:]
    rates = {
        c: [float(np.log2(errors[c][i] / errors[c][i + 1])) if errors[c][i + 1] > 0 else np.nan
            for i in range(len(err_res) - 1)]
        for c in comps
    }
    return ErrorReport(metric, res, err_res, rate_res, errors, rates)


# ---------------------------------------------------------------------------
# Snapshot files
# ---------------------------------------------------------------------------

def write_snapshot(state, grid, phi, gas: GasParams, path) -> None:
    """Comma-separated table of the physical fields, full double precision.

    1-D columns: y, rho, v, p, E.  2-D columns: x, y, rho, u, v, p, E with
    rows ordered x-major.  E is the fluid energy (potential part removed).
    """
    f = report_fields(state, phi, gas)
    fmt = "%.17g"
    with open(path, "w", encoding="utf-8") as fh:
        if isinstance(state, ConservedState1D):
            fh.write("y,rho,v,p,E\n")
            y = grid.centers()
            for k in range(grid.n_cells):
                fh.write(",".join(fmt % v for v in
                                  (y[k], f["rho"][k], f["v"][k], f["p"][k], f["energy"][k])))
                fh.write("\n")
        else:
            fh.write("x,y,rho,u,v,p,E\n")
            xc, yc = grid.centers_x(), grid.centers_y()
            for j in range(grid.nx):
                for k in range(grid.ny):
                    fh.write(",".join(fmt % v for v in
                                      (xc[j], yc[k], f["rho"][j, k], f["u"][j, k],
                                       f["v"][j, k], f["p"][j, k], f["energy"][j, k])))
                    fh.write("\n")


def read_snapshot(path) -> dict:
    """Read a snapshot back as a dict of 1-D column arrays."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != len(header):
        raise ValueError(f"malformed snapshot {path}")
    return {name: data[:, i].copy() for i, name in enumerate(header)}


def compare_snapshots(path_a, path_b) -> dict:
    """Per-column L1 (volume-weighted) and Linf differences of two snapshots."""
    a = read_snapshot(path_a)
    b = read_snapshot(path_b)
    if sorted(a) != sorted(b):
        raise ValueError("snapshots have different columns")
    coords = [c for c in ("x", "y") if c in a]
    vol = 1.0
    for c in coords:
        u = np.unique(a[c])
        if len(u) > 1:
            vol *= float(np.min(np.diff(u)))
        if not np.array_equal(a[c], b[c]):
            raise ValueError("snapshots sample different grids")
    out = {}
    for name in a:
        if name in coords:
            continue
        diff = np.abs(a[name] - b[name])
        out[name] = {"l1": float(diff.sum() * vol), "linf": float(diff.max())}
    return out
