"""Slope-limited piecewise-linear reconstruction of cell averages.

Conservative components (rho, momenta, augmented energy) are reconstructed
directly.  In well-balanced mode the equilibrium pressures are reconstructed
as well (one-dimensionally along their own direction) and interface pressures
are recovered by subtracting the interface load, so a state with constant
equilibrium pressure reproduces it exactly at every face.

All reconstruction functions take padded arrays (two ghost cells per side).
The outermost ghost cells get zero slopes; they only close the limiter
stencil of the inner ghosts, whose faces supply the boundary-interface states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GasParams, Grid1D, Grid2D, PositivityError, _first_bad


def minmod(*values):
    """Smallest value if all are positive, largest if all negative, else zero."""
    if not values:
        raise ValueError("minmod needs at least one argument")
    lo = values[0]
    hi = values[0]
    for v in values[1:]:
        lo = np.minimum(lo, v)
        hi = np.maximum(hi, v)
    out = np.where(lo > 0, lo, np.where(hi < 0, hi, 0.0))
    return out if np.ndim(out) else float(out)


def limited_slope(q_minus, q_center, q_plus, h: float, theta: float):
    """Generalized minmod slope from the three-cell stencil."""
    q_minus, q_center, q_plus = map(np.asarray, (q_minus, q_center, q_plus))
    return minmod(
        theta * (q_plus - q_center) / h,
        (q_plus - q_minus) / (2.0 * h),
        theta * (q_center - q_minus) / h,
    )


def limited_slopes(q: np.ndarray, h: float, theta: float, axis: int = 0) -> np.ndarray:
    """Slopes for every padded cell along ``axis``; ghost entries are zero."""
    q = np.asarray(q, dtype=float)
    sl = [slice(None)] * q.ndim

    def take(a, b):
        sl2 = sl.copy()
        sl2[axis] = slice(a, b)
        return q[tuple(sl2)]

    out = np.zeros_like(q)
    sl_mid = sl.copy()
    sl_mid[axis] = slice(1, -1)
    out[tuple(sl_mid)] = limited_slope(take(None, -2), take(1, -1), take(2, None), h, theta)
    return out


def face_values(q: np.ndarray, h: float, theta: float, axis: int = 0):
    """Low-side and high-side face values per padded cell along ``axis``."""
    s = limited_slopes(q, h, theta, axis=axis)
    return q - 0.5 * h * s, q + 0.5 * h * s


@dataclass(frozen=True)
class CellFaces1D:
    """Per padded cell: south (low) and north (high) face values of the conservative triple."""

    rho_S: np.ndarray
    rho_N: np.ndarray
    mom_S: np.ndarray
    mom_N: np.ndarray
    etot_S: np.ndarray
    etot_N: np.ndarray


def reconstruct_conservative_1d(rho_p, mom_p, etot_p, grid: Grid1D, theta: float) -> CellFaces1D:
    """Face values of (rho, mom, etot) from limited slopes on padded averages."""
    rS, rN = face_values(np.asarray(rho_p, float), grid.dy, theta)
    mS, mN = face_values(np.asarray(mom_p, float), grid.dy, theta)
    eS, eN = face_values(np.asarray(etot_p, float), grid.dy, theta)
    return CellFaces1D(rS, rN, mS, mN, eS, eN)


def reconstruct_equilibrium_1d(eqp_p, load_iface, grid: Grid1D, theta: float):
    """One-sided equilibrium pressures and recovered pressures at the interfaces.

    Returns (eqp_l, eqp_r, p_l, p_r), each of length n + 1, where the
    pressure on either side of interface i is its equilibrium-pressure face
    value minus the shared interface load.
    """
    eqp_S, eqp_N = face_values(np.asarray(eqp_p, float), grid.dy, theta)
    eqp_l, eqp_r = eqp_N[1:-2], eqp_S[2:-1]
    p_l = eqp_l - load_iface
    p_r = eqp_r - load_iface
    _check_face_positive(p_l, "reconstructed pressure", "left")
    _check_face_positive(p_r, "reconstructed pressure", "right")
    return eqp_l, eqp_r, p_l, p_r


@dataclass(frozen=True)
class InterfaceValues1D:
    """One-sided states at the n + 1 interfaces; ``l`` is the lower-coordinate side."""

    rho_l: np.ndarray
    mom_l: np.ndarray
    etot_l: np.ndarray
    v_l: np.ndarray
    p_l: np.ndarray
    E_l: np.ndarray
    eqp_l: np.ndarray
    rho_r: np.ndarray
    mom_r: np.ndarray
    etot_r: np.ndarray
    v_r: np.ndarray
    p_r: np.ndarray
    E_r: np.ndarray
    eqp_r: np.ndarray


def _check_face_positive(arr, what, side):
    bad = ~(np.asarray(arr) > 0.0)
    if bad.any():
        idx = _first_bad(bad)
        raise PositivityError(f"non-positive {what} at interface {idx} ({side} side)")


def interface_values_1d(
    rho_p, mom_p, etot_p, eqp_p,
    load_iface, phi_iface,
    grid: Grid1D, theta: float, gas: GasParams, mode: str,
) -> InterfaceValues1D:
    """Assemble left/right interface states for the chosen reconstruction mode.

    ``mode == "wb"`` recovers p and E from the reconstructed equilibrium
    pressure; ``mode == "baseline"`` derives them from the conservative
    reconstruction of the augmented energy.
    """
    gm1 = gas.gamma - 1.0
    cf = reconstruct_conservative_1d(rho_p, mom_p, etot_p, grid, theta)
    rho_l, rho_r = cf.rho_N[1:-2], cf.rho_S[2:-1]
    mom_l, mom_r = cf.mom_N[1:-2], cf.mom_S[2:-1]
    etot_l, etot_r = cf.etot_N[1:-2], cf.etot_S[2:-1]
    _check_face_positive(rho_l, "density", "left")
    _check_face_positive(rho_r, "density", "right")
    v_l = mom_l / rho_l
    v_r = mom_r / rho_r

    if mode == "wb":
        eqp_l, eqp_r, p_l, p_r = reconstruct_equilibrium_1d(eqp_p, load_iface, grid, theta)
        E_l = p_l / gm1 + 0.5 * rho_l * v_l**2
        E_r = p_r / gm1 + 0.5 * rho_r * v_r**2
    elif mode == "baseline":
        E_l = etot_l - rho_l * phi_iface
        E_r = etot_r - rho_r * phi_iface
        p_l = gm1 * (E_l - 0.5 * rho_l * v_l**2)
        p_r = gm1 * (E_r - 0.5 * rho_r * v_r**2)
        eqp_l = p_l + load_iface
        eqp_r = p_r + load_iface
    else:
        raise ValueError(f"unknown mode {mode!r}")
    _check_face_positive(p_l, "pressure", "left")
    _check_face_positive(p_r, "pressure", "right")
    return InterfaceValues1D(
        rho_l, mom_l, etot_l, v_l, p_l, E_l, eqp_l,
        rho_r, mom_r, etot_r, v_r, p_r, E_r, eqp_r,
    )


@dataclass(frozen=True)
class DirectionalFaces2D:
    """One-sided states at the interfaces normal to one direction.

    Shapes are (nx + 1, ny) for the x-direction and (nx, ny + 1) for the
    y-direction.  ``eqp`` is the equilibrium pressure belonging to the normal
    direction; ``c`` is the sound speed.
    """

    rho_l: np.ndarray
    mx_l: np.ndarray
    my_l: np.ndarray
    etot_l: np.ndarray
    u_l: np.ndarray
    v_l: np.ndarray
    p_l: np.ndarray
    E_l: np.ndarray
    eqp_l: np.ndarray
    c_l: np.ndarray
    rho_r: np.ndarray
    mx_r: np.ndarray
    my_r: np.ndarray
    etot_r: np.ndarray
    u_r: np.ndarray
    v_r: np.ndarray
    p_r: np.ndarray
    E_r: np.ndarray
    eqp_r: np.ndarray
    c_r: np.ndarray


@dataclass(frozen=True)
class InterfaceValues2D:
    x: DirectionalFaces2D
    y: DirectionalFaces2D


def _directional_faces(
    cons_faces, eqp_faces, load_iface, phi_iface, slicer, gm1, gamma, mode, axis_name
):
    """Build one direction's interface states from per-cell face arrays."""
    (rho_lo, rho_hi), (mx_lo, mx_hi), (my_lo, my_hi), (et_lo, et_hi) = cons_faces
    lo, hi = slicer
    rho_l, rho_r = rho_hi[lo], rho_lo[hi]
    mx_l, mx_r = mx_hi[lo], mx_lo[hi]
    my_l, my_r = my_hi[lo], my_lo[hi]
    etot_l, etot_r = et_hi[lo], et_lo[hi]
    _check_face_positive(rho_l, "density", f"{axis_name}-left")
    _check_face_positive(rho_r, "density", f"{axis_name}-right")
    u_l, u_r = mx_l / rho_l, mx_r / rho_r
    v_l, v_r = my_l / rho_l, my_r / rho_r
    ke_l = 0.5 * rho_l * (u_l**2 + v_l**2)
    ke_r = 0.5 * rho_r * (u_r**2 + v_r**2)
    if mode == "wb":
        eqp_lo, eqp_hi = eqp_faces
        eqp_l, eqp_r = eqp_hi[lo], eqp_lo[hi]
        p_l = eqp_l - load_iface
        p_r = eqp_r - load_iface
        E_l = p_l / gm1 + ke_l
        E_r = p_r / gm1 + ke_r
    else:
        E_l = etot_l - rho_l * phi_iface
        E_r = etot_r - rho_r * phi_iface
        p_l = gm1 * (E_l - ke_l)
        p_r = gm1 * (E_r - ke_r)
        eqp_l = p_l + load_iface
        eqp_r = p_r + load_iface
    _check_face_positive(p_l, "pressure", f"{axis_name}-left")
    _check_face_positive(p_r, "pressure", f"{axis_name}-right")
    c_l = np.sqrt(gamma * p_l / rho_l)
    c_r = np.sqrt(gamma * p_r / rho_r)
    return DirectionalFaces2D(
        rho_l, mx_l, my_l, etot_l, u_l, v_l, p_l, E_l, eqp_l, c_l,
        rho_r, mx_r, my_r, etot_r, u_r, v_r, p_r, E_r, eqp_r, c_r,
    )


def reconstruct_2d(
    rho_p, mx_p, my_p, etot_p, eqpx_p, eqpy_p,
    load_x_iface, load_y_iface, phi,
    grid: Grid2D, theta: float, gas: GasParams, mode: str,
) -> InterfaceValues2D:
    """Interface states in both directions on a padded 2-D state.

    Conservative components get limited slopes in each direction; the two
    equilibrium pressures are reconstructed only along their own direction.
    """
    if mode not in ("wb", "baseline"):
        raise ValueError(f"unknown mode {mode!r}")
    gm1 = gas.gamma - 1.0
    cons = [np.asarray(a, float) for a in (rho_p, mx_p, my_p, etot_p)]

    faces_x = [face_values(a, grid.dx, theta, axis=0) for a in cons]
    eqpx_faces = face_values(np.asarray(eqpx_p, float), grid.dx, theta, axis=0) if mode == "wb" else None
    sl_x = ((slice(1, -2), slice(2, -2)), (slice(2, -1), slice(2, -2)))
    x_faces = _directional_faces(
        faces_x, eqpx_faces, load_x_iface, phi.phi_iface_x,
        sl_x, gm1, gas.gamma, mode, "x",
    )

    faces_y = [face_values(a, grid.dy, theta, axis=1) for a in cons]
    eqpy_faces = face_values(np.asarray(eqpy_p, float), grid.dy, theta, axis=1) if mode == "wb" else None
    sl_y = ((slice(2, -2), slice(1, -2)), (slice(2, -2), slice(2, -1)))
    y_faces = _directional_faces(
        faces_y, eqpy_faces, load_y_iface, phi.phi_iface_y,
        sl_y, gm1, gas.gamma, mode, "y",
    )
    return InterfaceValues2D(x=x_faces, y=y_faces)
