"""Benchmark problems: initial data, potentials and boundary conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import gravity
from .core import (
    ConservedState1D,
    ConservedState2D,
    GasParams,
    Grid1D,
    Grid2D,
    sample_potential_1d,
    sample_potential_2d,
)
from .evolution import (
    HYDROSTATIC,
    REFLECTING,
    ZERO_ORDER,
    BoundarySpec1D,
    BoundarySpec2D,
)


@dataclass(frozen=True)
class Problem1D:
    name: str
    y_left: float
    y_right: float
    phi: Callable
    dphi: Callable
    bc: BoundarySpec1D
    init: Callable              # (grid, phi_field, gas) -> ConservedState1D
    n_default: int = 100
    t_final_default: float = 1.0
    snap_default: tuple = ()
    dimension: int = 1

    def make_grid(self, n=None) -> Grid1D:
        return Grid1D(self.y_left, self.y_right, int(n or self.n_default))

    def potential(self, grid: Grid1D):
        return sample_potential_1d(grid, self.phi, self.dphi)

    def initial_state(self, grid: Grid1D, gas: GasParams) -> ConservedState1D:
        return self.init(grid, self.potential(grid), gas)


@dataclass(frozen=True)
class Problem2D:
    name: str
    x_left: float
    x_right: float
    y_left: float
    y_right: float
    phi: Callable
    phi_x: Callable
    phi_y: Callable
    bc: BoundarySpec2D
    init: Callable              # (grid, phi_field, gas) -> ConservedState2D
    nx_default: int = 100
    ny_default: int = 100
    t_final_default: float = 1.0
    snap_default: tuple = ()
    dimension: int = 2

    def make_grid(self, n=None) -> Grid2D:
        if n is None:
            nx, ny = self.nx_default, self.ny_default
        elif np.isscalar(n):
            nx = ny = int(n)
        else:
            nx, ny = int(n[0]), int(n[1])
        return Grid2D(self.x_left, self.x_right, self.y_left, self.y_right, nx, ny)

    def potential(self, grid: Grid2D):
        return sample_potential_2d(grid, self.phi, self.phi_x, self.phi_y)

    def initial_state(self, grid: Grid2D, gas: GasParams) -> ConservedState2D:
        return self.init(grid, self.potential(grid), gas)


def sod_tube() -> Problem1D:
    """Shock tube under a linear potential, reflecting walls, T = 0.2."""

    def init(grid, phi_field, gas):
        y = grid.centers()
        left = y <= 0.5
        rho = np.where(left, 1.0, 0.125)
        p = np.where(left, 1.0, 0.1)
        E = p / (gas.gamma - 1.0)
        etot = E + rho * phi_field.phi_center_interior
        return ConservedState1D.from_fields(rho, np.zeros_like(rho), etot)

    return Problem1D(
        name="sod",
        y_left=0.0, y_right=1.0,
        phi=lambda y: np.asarray(y, float),
        dphi=lambda y: np.ones_like(np.asarray(y, float)),
        bc=BoundarySpec1D(REFLECTING, REFLECTING),
        init=init,
        n_default=100,
        t_final_default=0.2,
    )


_POTENTIALS_1D = {
    "linear": (lambda y: np.asarray(y, float),
               lambda y: np.ones_like(np.asarray(y, float))),
    "quadratic": (lambda y: 0.5 * np.asarray(y, float) ** 2,
                  lambda y: np.asarray(y, float)),
    "sine": (lambda y: np.sin(2.0 * np.pi * np.asarray(y, float)),
             lambda y: 2.0 * np.pi * np.cos(2.0 * np.pi * np.asarray(y, float))),
}


def isothermal_1d(phi_kind: str = "linear", eta: float = 0.0,
                  bump_center: float = 0.5, bump_decay: float = 100.0,
                  discrete_ic: bool = True) -> Problem1D:
    """Isothermal hydrostatic state rho = p = exp(-phi) with an optional
    Gaussian pressure perturbation of amplitude ``eta``.

    By default the initial data is the discrete steady state with constant
    equilibrium pressure 1, which the well-balanced scheme keeps frozen to
    rounding error.  With ``discrete_ic=False`` the continuum profile is
    sampled pointwise instead; it satisfies the discrete balance only to
    O(h^2), which is the relevant setup for measuring the plain scheme's
    truncation-error drift.
    """
    if phi_kind not in _POTENTIALS_1D:
        raise ValueError(f"phi_kind must be one of {sorted(_POTENTIALS_1D)}")
    if eta < 0:
        raise ValueError("eta must be non-negative")
    phi, dphi = _POTENTIALS_1D[phi_kind]

    def init(grid, phi_field, gas):
        y = grid.centers()
        if discrete_ic:
            state = gravity.hydrostatic_state_1d(np.exp(-phi(y)), 1.0, phi_field, grid, gas)
        else:
            rho = np.exp(-phi(y))
            E = rho / (gas.gamma - 1.0)  # p = rho for this profile
            etot = E + rho * phi_field.phi_center_interior
            state = ConservedState1D.from_fields(rho, np.zeros_like(rho), etot)
        if eta:
            bump = eta * np.exp(-bump_decay * (y - bump_center) ** 2)
            state.U[2] += bump / (gas.gamma - 1.0)
        return state

    return Problem1D(
        name=f"isothermal-{phi_kind}",
        y_left=0.0, y_right=1.0,
        phi=phi, dphi=dphi,
        bc=BoundarySpec1D(HYDROSTATIC, HYDROSTATIC),
        init=init,
        n_default=100,
        t_final_default=1.0,
    )


def isothermal_2d(eta: float = 0.0) -> Problem2D:
    """2-D isothermal hydrostatic state under phi = x + y on the unit square.

    Built by the discrete sweep constructor.  The per-column equilibrium
    pressure is the analytic pressure along the bottom edge, exp(-1.21*x);
    the per-row profile must be given in the sweep's right-edge-anchored
    convention, which for this state is the analytic pressure along the right
    edge, exp(-1.21*(x_right + y)).
    """
    if eta < 0:
        raise ValueError("eta must be non-negative")

    def init(grid, phi_field, gas):
        col_profile = np.exp(-1.21 * grid.centers_x())
        row_profile = np.exp(-1.21 * (grid.x_right + grid.centers_y()))
        state = gravity.hydrostatic_state_2d(col_profile, row_profile, phi_field, grid, gas)
        if eta:
            x = grid.centers_x()[:, None]
            y = grid.centers_y()[None, :]
            bump = eta * np.exp(-121.0 * ((x - 0.3) ** 2 + (y - 0.3) ** 2))
            state.U[3] += bump / (gas.gamma - 1.0)
        return state

    one = lambda x, y: np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape)
    return Problem2D(
        name="isothermal-2d",
        x_left=0.0, x_right=1.0, y_left=0.0, y_right=1.0,
        phi=lambda x, y: np.asarray(x, float) + np.asarray(y, float),
        phi_x=one, phi_y=one,
        bc=BoundarySpec2D(),
        init=init,
        nx_default=100, ny_default=100,
        t_final_default=0.15,
    )


def explosion_2d() -> Problem2D:
    """Pressurized disk in a stratified atmosphere, phi = 0.118*y on [0,3]^2."""

    def init(grid, phi_field, gas):
        x = grid.centers_x()[:, None]
        y = grid.centers_y()[None, :]
        rho = np.ones((grid.nx, grid.ny))
        p = 1.0 - 0.118 * y + np.where((x - 1.5) ** 2 + (y - 1.5) ** 2 < 0.01, 0.005, 0.0)
        E = p / (gas.gamma - 1.0)
        etot = E + rho * phi_field.phi_center_interior
        zeros = np.zeros_like(rho)
        return ConservedState2D.from_fields(rho, zeros, zeros, etot)

    zero = lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)
    return Problem2D(
        name="explosion",
        x_left=0.0, x_right=3.0, y_left=0.0, y_right=3.0,
        phi=lambda x, y: 0.118 * np.asarray(y, float) + 0.0 * np.asarray(x, float),
        phi_x=zero,
        phi_y=lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, 0.118),
        bc=BoundarySpec2D(),
        init=init,
        nx_default=101, ny_default=101,
        t_final_default=2.4,
        snap_default=(1.2, 1.8, 2.4),
    )


def get_problem(name: str, eta: float | None = None):
    """Look up a problem by its command-line name; ``eta`` overrides the
    perturbation amplitude where the problem has one."""
    builders = {
        "sod": lambda: sod_tube(),
        "isothermal-linear": lambda: isothermal_1d("linear", eta or 0.0),
        "isothermal-quadratic": lambda: isothermal_1d("quadratic", eta or 0.0),
        "isothermal-sine": lambda: isothermal_1d("sine", eta or 0.0),
        "isothermal-2d": lambda: isothermal_2d(eta or 0.0),
        "explosion": lambda: explosion_2d(),
    }
    if name not in builders:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(builders)}")
    if eta is not None and name in ("sod", "explosion"):
        raise ValueError(f"problem {name!r} has no perturbation amplitude")
    return builders[name]()


PROBLEM_NAMES = ("sod", "isothermal-linear", "isothermal-quadratic",
                 "isothermal-sine", "isothermal-2d", "explosion")
