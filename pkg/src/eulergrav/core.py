"""Grids, state containers, gas parameters and primitive/conservative conversions.

Conventions used throughout the package:

* 1-D grids run along ``y``; interior cells are indexed ``k = 0..n_cells-1``
  with centers ``y_k = y_left + (k + 1/2) dy``.
* 2-D grids are indexed ``[j, k]`` (x-index first, row-major storage).
* Every grid carries two ghost cells per side.  "Padded" arrays have shape
  ``n + 4`` (or ``(nx + 4, ny + 4)``) with the interior in ``[2:-2]``.  The
  inner ghost supplies the boundary-interface states; the outer one only
  closes the limiter stencil of the inner ghost, so boundary faces are
  second-order accurate like interior ones.
* The evolved energy component stores ``E + rho*phi`` (total energy augmented
  by the gravitational potential energy density), with the cell average
  approximated by the midpoint rule ``E_k + rho_k * phi(center_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class SolverError(Exception):
    """Base class for numerical failures raised by this package."""


class PositivityError(SolverError):
    """Density or pressure lost positivity somewhere it is required."""


class ConstructionError(SolverError):
    """A discrete steady state could not be constructed from the given data."""


class StepLimitError(SolverError):
    """The time loop exceeded its step budget before reaching t_final."""


def _first_bad(mask: np.ndarray):
    """Index (int or tuple) of the first True entry of a boolean mask."""
    flat = int(np.argmax(mask))
    if mask.ndim == 1:
        return flat
    return tuple(int(i) for i in np.unravel_index(flat, mask.shape))


def require_positive(arr: np.ndarray, what: str, where: str = "cell") -> None:
    """Raise :class:`PositivityError` naming the first offending cell."""
    arr = np.asarray(arr)
    bad = ~(arr > 0.0)
    if bad.any():
        idx = _first_bad(bad)
        raise PositivityError(
            f"non-positive {what} at {where} {idx} (value {np.asarray(arr)[idx]:.6g})"
        )


@dataclass(frozen=True)
class GasParams:
    """Ideal-gas parameters; only the specific heat ratio is needed."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


@dataclass(frozen=True)
class Grid1D:
    y_left: float
    y_right: float
    n_cells: int
    ghost_layers: int = 2

    def __post_init__(self):
        if self.n_cells < 3:
            raise ValueError("need at least 3 cells")
        if not self.y_right > self.y_left:
            raise ValueError("empty domain")
        if self.ghost_layers != 2:
            raise ValueError("exactly two ghost layers are supported")

    @property
    def dy(self) -> float:
        return (self.y_right - self.y_left) / self.n_cells

    @property
    def length(self) -> float:
        return self.y_right - self.y_left

    def centers(self) -> np.ndarray:
        """Interior cell centers, length n_cells."""
        return self.y_left + (np.arange(self.n_cells) + 0.5) * self.dy

    def padded_centers(self) -> np.ndarray:
        """Cell centers including ghosts, length n_cells + 4."""
        g = self.ghost_layers
        return self.y_left + (np.arange(-g, self.n_cells + g) + 0.5) * self.dy

    def interfaces(self) -> np.ndarray:
        """Interface coordinates, length n_cells + 1."""
        return self.y_left + np.arange(self.n_cells + 1) * self.dy


@dataclass(frozen=True)
class Grid2D:
    x_left: float
    x_right: float
    y_left: float
    y_right: float
    nx: int
    ny: int
    ghost_layers: int = 2

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError("need at least 3 cells per direction")
        if not (self.x_right > self.x_left and self.y_right > self.y_left):
            raise ValueError("empty domain")
        if self.ghost_layers != 2:
            raise ValueError("exactly two ghost layers are supported")

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_right - self.y_left) / self.ny

    @property
    def length_x(self) -> float:
        return self.x_right - self.x_left

    @property
    def length_y(self) -> float:
        return self.y_right - self.y_left

    def centers_x(self) -> np.ndarray:
        return self.x_left + (np.arange(self.nx) + 0.5) * self.dx

    def centers_y(self) -> np.ndarray:
        return self.y_left + (np.arange(self.ny) + 0.5) * self.dy

    def padded_centers_x(self) -> np.ndarray:
        g = self.ghost_layers
        return self.x_left + (np.arange(-g, self.nx + g) + 0.5) * self.dx

    def padded_centers_y(self) -> np.ndarray:
        g = self.ghost_layers
        return self.y_left + (np.arange(-g, self.ny + g) + 0.5) * self.dy

    def interfaces_x(self) -> np.ndarray:
        return self.x_left + np.arange(self.nx + 1) * self.dx

    def interfaces_y(self) -> np.ndarray:
        return self.y_left + np.arange(self.ny + 1) * self.dy


@dataclass
class ConservedState1D:
    """Interior cell averages of (rho, rho*v, E + rho*phi), stacked as U[3, n]."""

    U: np.ndarray

    def __post_init__(self):
        self.U = np.array(self.U, dtype=float)
        if self.U.ndim != 2 or self.U.shape[0] != 3:
            raise ValueError("expected array of shape (3, n_cells)")
        require_positive(self.U[0], "density")

    @classmethod
    def from_fields(cls, rho, mom, etot) -> "ConservedState1D":
        return cls(np.stack([rho, mom, etot]).astype(float))

    @property
    def rho(self) -> np.ndarray:
        return self.U[0]

    @property
    def mom(self) -> np.ndarray:
        return self.U[1]

    @property
    def etot(self) -> np.ndarray:
        return self.U[2]

    @property
    def n_cells(self) -> int:
        return self.U.shape[1]

    def copy(self) -> "ConservedState1D":
        return ConservedState1D(self.U.copy())


@dataclass
class ConservedState2D:
    """Interior cell averages of (rho, rho*u, rho*v, E + rho*phi) as U[4, nx, ny]."""

    U: np.ndarray

    def __post_init__(self):
        self.U = np.array(self.U, dtype=float)
        if self.U.ndim != 3 or self.U.shape[0] != 4:
            raise ValueError("expected array of shape (4, nx, ny)")
        require_positive(self.U[0], "density")

    @classmethod
    def from_fields(cls, rho, mom_x, mom_y, etot) -> "ConservedState2D":
        return cls(np.stack([rho, mom_x, mom_y, etot]).astype(float))

    @property
    def rho(self) -> np.ndarray:
        return self.U[0]

    @property
    def mom_x(self) -> np.ndarray:
        return self.U[1]

    @property
    def mom_y(self) -> np.ndarray:
        return self.U[2]

    @property
    def etot(self) -> np.ndarray:
        return self.U[3]

    @property
    def shape(self):
        return self.U.shape[1:]

    def copy(self) -> "ConservedState2D":
        return ConservedState2D(self.U.copy())


@dataclass(frozen=True)
class PotentialField1D:
    """Gravitational potential sampled on a 1-D grid.

    ``phi_center`` and ``dphi_center`` cover ghosts (length n + 4);
    ``phi_iface`` covers the n + 1 interfaces.
    """

    phi_center: np.ndarray
    phi_iface: np.ndarray
    dphi_center: np.ndarray

    @property
    def phi_center_interior(self) -> np.ndarray:
        return self.phi_center[2:-2]

    @property
    def dphi_center_interior(self) -> np.ndarray:
        return self.dphi_center[2:-2]


@dataclass(frozen=True)
class PotentialField2D:
    """Potential samples on a 2-D grid: padded centers and gradients, interface lines."""

    phi_center: np.ndarray      # (nx + 4, ny + 4)
    phi_iface_x: np.ndarray     # (nx + 1, ny): phi(x_interface, y_center)
    phi_iface_y: np.ndarray     # (nx, ny + 1): phi(x_center, y_interface)
    dphi_x: np.ndarray          # (nx + 4, ny + 4)
    dphi_y: np.ndarray          # (nx + 4, ny + 4)

    @property
    def phi_center_interior(self) -> np.ndarray:
        return self.phi_center[2:-2, 2:-2]

    @property
    def dphi_x_interior(self) -> np.ndarray:
        return self.dphi_x[2:-2, 2:-2]

    @property
    def dphi_y_interior(self) -> np.ndarray:
        return self.dphi_y[2:-2, 2:-2]


def sample_potential_1d(grid: Grid1D, phi: Callable, dphi: Callable) -> PotentialField1D:
    yp = grid.padded_centers()
    return PotentialField1D(
        phi_center=np.asarray(phi(yp), dtype=float),
        phi_iface=np.asarray(phi(grid.interfaces()), dtype=float),
        dphi_center=np.asarray(dphi(yp), dtype=float),
    )


def sample_potential_2d(grid: Grid2D, phi: Callable, phi_x: Callable, phi_y: Callable) -> PotentialField2D:
    xp = grid.padded_centers_x()[:, None]
    yp = grid.padded_centers_y()[None, :]
    xc = grid.centers_x()[:, None]
    yc = grid.centers_y()[None, :]
    xi = grid.interfaces_x()[:, None]
    yi = grid.interfaces_y()[None, :]
    g = 2 * grid.ghost_layers
    full = np.broadcast_to
    return PotentialField2D(
        phi_center=np.asarray(full(phi(xp, yp), (grid.nx + g, grid.ny + g)), dtype=float).copy(),
        phi_iface_x=np.asarray(full(phi(xi, yc), (grid.nx + 1, grid.ny)), dtype=float).copy(),
        phi_iface_y=np.asarray(full(phi(xc, yi), (grid.nx, grid.ny + 1)), dtype=float).copy(),
        dphi_x=np.asarray(full(phi_x(xp, yp), (grid.nx + g, grid.ny + g)), dtype=float).copy(),
        dphi_y=np.asarray(full(phi_y(xp, yp), (grid.nx + g, grid.ny + g)), dtype=float).copy(),
    )


def _kinetic(rho, mom):
    """Kinetic energy density |mom|^2 / (2 rho); mom may be an array or a tuple of components."""
    if isinstance(mom, (tuple, list)):
        msq = sum(np.asarray(m) ** 2 for m in mom)
    else:
        msq = np.asarray(mom) ** 2
    return 0.5 * msq / np.asarray(rho)


def pressure_from_conserved(rho, mom, E, gas: GasParams):
    """p = (gamma - 1) (E - |mom|^2 / (2 rho)).  E is the fluid total energy."""
    require_positive(rho, "density")
    return (gas.gamma - 1.0) * (np.asarray(E) - _kinetic(rho, mom))


def energy_from_pressure(rho, mom, p, gas: GasParams):
    """Inverse of :func:`pressure_from_conserved`."""
    require_positive(rho, "density")
    require_positive(p, "pressure")
    return np.asarray(p) / (gas.gamma - 1.0) + _kinetic(rho, mom)


def sound_speed(rho, p, gas: GasParams):
    """c = sqrt(gamma p / rho)."""
    require_positive(rho, "density")
    require_positive(p, "pressure")
    return np.sqrt(gas.gamma * np.asarray(p) / np.asarray(rho))


def augment_energy(E, rho, phi_center):
    """Fold the potential energy into the energy average: E + rho * phi(center)."""
    E, rho, phi_center = map(np.asarray, (E, rho, phi_center))
    if not (E.shape == rho.shape == phi_center.shape):
        raise ValueError("mismatched extents")
    return E + rho * phi_center


def deaugment_energy(etot, rho, phi_center):
    """Remove the potential energy from the evolved energy average."""
    etot, rho, phi_center = map(np.asarray, (etot, rho, phi_center))
    if not (etot.shape == rho.shape == phi_center.shape):
        raise ValueError("mismatched extents")
    return etot - rho * phi_center
