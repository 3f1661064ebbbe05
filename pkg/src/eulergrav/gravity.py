"""Cumulative gravity-source integrals and discrete hydrostatic steady states.

The momentum flux is closed with the running integral of ``rho * dphi`` along
each direction (midpoint quadrature, accumulated strictly left-to-right /
bottom-to-top so results are bit-reproducible).  Adding that "load" to the
pressure gives the equilibrium pressure, which is constant along the
respective direction for motionless hydrostatic states; the solver reconstructs
that quantity instead of the energy to keep such states exactly steady.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ConservedState1D,
    ConservedState2D,
    ConstructionError,
    GasParams,
    Grid1D,
    Grid2D,
    PotentialField1D,
    PotentialField2D,
)


@dataclass(frozen=True)
class EquilibriumField1D:
    """Gravity load at interfaces/centers and the equilibrium pressure p + load."""

    load_iface: np.ndarray    # (n + 1,), zero at the lower domain edge
    load_center: np.ndarray   # (n,)
    eqp_center: np.ndarray    # (n,)


@dataclass(frozen=True)
class EquilibriumField2D:
    load_x_iface: np.ndarray   # (nx + 1, ny), zero on the left edge of each row
    load_x_center: np.ndarray  # (nx, ny)
    load_y_iface: np.ndarray   # (nx, ny + 1), zero on the bottom edge of each column
    load_y_center: np.ndarray  # (nx, ny)
    eqp_x_center: np.ndarray   # (nx, ny): p + load_x, constant in x at rest states
    eqp_y_center: np.ndarray   # (nx, ny): p + load_y, constant in y at rest states


def hydrostatic_load_1d(rho_avg: np.ndarray, phi: PotentialField1D, grid: Grid1D):
    """Running integral of rho * phi' over the domain (midpoint rule).

    Returns interface values (zero at the lower edge) and their cell-center
    midpoints.
    """
    rho_avg = np.asarray(rho_avg, dtype=float)
    if rho_avg.shape != (grid.n_cells,):
        raise ValueError("rho_avg must cover the interior cells")
    inc = grid.dy * rho_avg * phi.dphi_center_interior
    load_iface = np.empty(grid.n_cells + 1)
    load_iface[0] = 0.0
    np.cumsum(inc, out=load_iface[1:])
    load_center = 0.5 * (load_iface[:-1] + load_iface[1:])
    return load_iface, load_center


def hydrostatic_load_2d(rho_avg: np.ndarray, phi: PotentialField2D, grid: Grid2D):
    """Directional load integrals: along x per row and along y per column."""
    rho_avg = np.asarray(rho_avg, dtype=float)
    if rho_avg.shape != (grid.nx, grid.ny):
        raise ValueError("rho_avg must cover the interior cells")
    lx_iface = np.zeros((grid.nx + 1, grid.ny))
    np.cumsum(grid.dx * rho_avg * phi.dphi_x_interior, axis=0, out=lx_iface[1:])
    ly_iface = np.zeros((grid.nx, grid.ny + 1))
    np.cumsum(grid.dy * rho_avg * phi.dphi_y_interior, axis=1, out=ly_iface[:, 1:])
    lx_center = 0.5 * (lx_iface[:-1] + lx_iface[1:])
    ly_center = 0.5 * (ly_iface[:, :-1] + ly_iface[:, 1:])
    return lx_iface, lx_center, ly_iface, ly_center


def equilibrium_field_1d(rho_avg, p_center, phi, grid) -> EquilibriumField1D:
    load_iface, load_center = hydrostatic_load_1d(rho_avg, phi, grid)
    return EquilibriumField1D(load_iface, load_center, np.asarray(p_center) + load_center)


def equilibrium_field_2d(rho_avg, p_center, phi, grid) -> EquilibriumField2D:
    lxi, lxc, lyi, lyc = hydrostatic_load_2d(rho_avg, phi, grid)
    p_center = np.asarray(p_center)
    return EquilibriumField2D(lxi, lxc, lyi, lyc, p_center + lxc, p_center + lyc)


def quadratic_load_linear_potential(rho_avg, rho_slopes, g: float, grid: Grid1D, y):
    """Piecewise-quadratic load for a linear potential phi = g*y.

    Integrates the piecewise-linear density reconstruction instead of applying
    the midpoint rule.  At interfaces this collapses to the midpoint-rule
    values; at centers it differs by the slope term -g*dy^2*(rho_y)_k / 8.
    """
    rho_avg = np.asarray(rho_avg, dtype=float)
    rho_slopes = np.asarray(rho_slopes, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y < grid.y_left) or np.any(y > grid.y_right):
        raise ValueError("y outside the domain")
    k = np.minimum((np.floor((y - grid.y_left) / grid.dy)).astype(int), grid.n_cells - 1)
    prefix = np.concatenate(([0.0], np.cumsum(rho_avg))) * g * grid.dy
    y_lo = grid.y_left + k * grid.dy
    y_hi = y_lo + grid.dy
    val = prefix[k] + g * (rho_avg[k] * (y - y_lo) + 0.5 * rho_slopes[k] * (y - y_lo) * (y - y_hi))
    return val if val.ndim else float(val)


def hydrostatic_state_1d(
    rho_centers: np.ndarray,
    eq_pressure: float,
    phi: PotentialField1D,
    grid: Grid1D,
    gas: GasParams,
) -> ConservedState1D:
    """Motionless discrete steady state with a constant equilibrium pressure.

    Pressures are recovered as eq_pressure minus the center load, so the
    equilibrium pressure recomputed from the result is constant to rounding.
    """
    rho = np.asarray(rho_centers, dtype=float)
    _, load_center = hydrostatic_load_1d(rho, phi, grid)
    p = eq_pressure - load_center
    bad = ~(p > 0.0)
    if bad.any():
        k = int(np.argmax(bad))
        raise ConstructionError(
            f"non-positive pressure {p[k]:.6g} at cell {k}: equilibrium pressure too small"
        )
    E = p / (gas.gamma - 1.0)
    etot = E + rho * phi.phi_center_interior
    return ConservedState1D.from_fields(rho, np.zeros_like(rho), etot)


def hydrostatic_state_2d(
    eqp_y_profile: np.ndarray,
    eqp_x_profile: np.ndarray,
    phi: PotentialField2D,
    grid: Grid2D,
    gas: GasParams,
) -> ConservedState2D:
    """Motionless 2-D discrete steady state for potentials of the form phi(x + y).

    ``eqp_y_profile[j]`` prescribes the y-direction equilibrium pressure per
    column and ``eqp_x_profile[k]`` the x-direction one per row.  The column
    profile is anchored at the bottom edge (load zero there) while the row
    profile is anchored at the RIGHT edge, because the sweep accumulates the
    x-load from the right; profiles must agree at the bottom-right corner up
    to O(h).  Cells are filled right-to-left, bottom-to-top, inverting the
    discrete relation between the two equilibrium pressures cell by cell.
    """
    nx, ny = grid.nx, grid.ny
    lj = np.asarray(eqp_y_profile, dtype=float)
    kk = np.asarray(eqp_x_profile, dtype=float)
    if lj.shape != (nx,) or kk.shape != (ny,):
        raise ValueError("profiles must match the grid extents")
    if np.any(lj <= 0) or np.any(kk <= 0):
        raise ConstructionError("equilibrium pressure profiles must be positive")
    dx, dy = grid.dx, grid.dy
    phix, phiy = phi.dphi_x_interior, phi.dphi_y_interior
    denom = 0.5 * dx * phix + 0.5 * dy * phiy
    if np.any(np.abs(denom) < 1e-300):
        raise ConstructionError(
            "degenerate potential: dx*phi_x + dy*phi_y vanishes at a cell center"
        )
    skew = 0.5 * dx * phix - 0.5 * dy * phiy

    rho = np.empty((nx, ny))
    p = np.empty((nx, ny))
    qcol = np.zeros(ny)  # x-load on the right face of the current column
    for j in range(nx - 1, -1, -1):
        racc = 0.0  # y-load on the bottom face of the current cell
        for k in range(ny):
            r = (lj[j] - kk[k] - racc + qcol[k]) / denom[j, k]
            if not r > 0.0:
                raise ConstructionError(f"non-positive density {r:.6g} at cell ({j}, {k})")
            pk = 0.5 * (lj[j] + kk[k] - racc - qcol[k] + skew[j, k] * r)
            if not pk > 0.0:
                raise ConstructionError(f"non-positive pressure {pk:.6g} at cell ({j}, {k})")
            rho[j, k] = r
            p[j, k] = pk
            qcol[k] -= dx * r * phix[j, k]
            racc += dy * r * phiy[j, k]

    E = p / (gas.gamma - 1.0)
    etot = E + rho * phi.phi_center_interior
    zeros = np.zeros_like(rho)
    return ConservedState2D.from_fields(rho, zeros, zeros, etot)
