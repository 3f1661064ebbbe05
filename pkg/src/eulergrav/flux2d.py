"""Two-dimensional central-upwind numerical fluxes, dimension by dimension.

Each direction uses its own global-flux form: the normal momentum flux carries
that direction's equilibrium pressure.  As in 1-D, the anti-diffusion of the
density and energy components is gated by the steadiness cutoff built from
the same direction's equilibrium-pressure jumps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Grid2D
from .flux1d import (
    DEGENERATE_SPEED_GAP,
    CutoffParams,
    _antidiffusion,
    cutoff_weight,
    imbalance_indicator_1d,
)
from .reconstruction import DirectionalFaces2D, InterfaceValues2D


@dataclass(frozen=True)
class DirectionalSpeeds2D:
    """One-sided speed bounds: a_+/- at x-interfaces, b_+/- at y-interfaces."""

    a_plus: np.ndarray
    a_minus: np.ndarray
    b_plus: np.ndarray
    b_minus: np.ndarray


def local_speeds_2d(iv: InterfaceValues2D) -> DirectionalSpeeds2D:
    fx, fy = iv.x, iv.y
    a_plus = np.maximum(np.maximum(fx.u_l + fx.c_l, fx.u_r + fx.c_r), 0.0)
    a_minus = np.minimum(np.minimum(fx.u_l - fx.c_l, fx.u_r - fx.c_r), 0.0)
    b_plus = np.maximum(np.maximum(fy.v_l + fy.c_l, fy.v_r + fy.c_r), 0.0)
    b_minus = np.minimum(np.minimum(fy.v_l - fy.c_l, fy.v_r - fy.c_r), 0.0)
    return DirectionalSpeeds2D(a_plus, a_minus, b_plus, b_minus)


def physical_flux_x(rho, mx, my, etot, u, v, p, E, eqp, phi_iface):
    return (mx, mx * u + eqp, mx * v, u * (E + rho * phi_iface + p))


def physical_flux_y(rho, mx, my, etot, u, v, p, E, eqp, phi_iface):
    return (my, my * u, my * v + eqp, v * (E + rho * phi_iface + p))


def _side_flux(f: DirectionalFaces2D, phi_iface, normal: str):
    args_l = (f.rho_l, f.mx_l, f.my_l, f.etot_l, f.u_l, f.v_l, f.p_l, f.E_l, f.eqp_l, phi_iface)
    args_r = (f.rho_r, f.mx_r, f.my_r, f.etot_r, f.u_r, f.v_r, f.p_r, f.E_r, f.eqp_r, phi_iface)
    flux = physical_flux_x if normal == "x" else physical_flux_y
    return flux(*args_l), flux(*args_r)


def antidiffusion_2d(iv: InterfaceValues2D, speeds: DirectionalSpeeds2D, phi_ifx, phi_ify):
    """Anti-diffusion corrections (4 components) at the x- and y-interfaces."""
    out = []
    for f, bp, bm, phi_if, normal in (
        (iv.x, speeds.a_plus, speeds.a_minus, phi_ifx, "x"),
        (iv.y, speeds.b_plus, speeds.b_minus, phi_ify, "y"),
    ):
        gap = bp - bm
        degenerate = gap < DEGENERATE_SPEED_GAP
        safe = np.where(degenerate, 1.0, gap)
        F_l, F_r = _side_flux(f, phi_if, normal)
        q_l = (f.rho_l, f.mx_l, f.my_l, f.etot_l)
        q_r = (f.rho_r, f.mx_r, f.my_r, f.etot_r)
        out.append(_antidiffusion(q_l, q_r, F_l, F_r, bp, bm, safe, degenerate))
    return tuple(out)


def _cu_flux_direction(f: DirectionalFaces2D, bp, bm, h_weights, phi_iface, normal: str):
    """Four flux components at one direction's interfaces.

    The normal-momentum component carries the equilibrium pressure and plain
    anti-diffusion; density and energy anti-diffusion are scaled by
    ``h_weights``; the transverse momentum keeps plain anti-diffusion.
    """
    gap = bp - bm
    degenerate = gap < DEGENERATE_SPEED_GAP
    safe = np.where(degenerate, 1.0, gap)
    F_l, F_r = _side_flux(f, phi_iface, normal)
    q_l = (f.rho_l, f.mx_l, f.my_l, f.etot_l)
    q_r = (f.rho_r, f.mx_r, f.my_r, f.etot_r)
    d_rho, d_mx, d_my, d_etot = _antidiffusion(q_l, q_r, F_l, F_r, bp, bm, safe, degenerate)

    alpha = bp * bm / safe
    rhophi_l = f.rho_l * phi_iface
    rhophi_r = f.rho_r * phi_iface
    up = [(bp * fl - bm * fr) / safe for fl, fr in zip(F_l, F_r)]

    c1 = up[0] + alpha * h_weights * (f.rho_r - f.rho_l - d_rho)
    cx = up[1] + alpha * (f.mx_r - f.mx_l - d_mx)
    cy = up[2] + alpha * (f.my_r - f.my_l - d_my)
    c4 = up[3] + alpha * (f.E_r - f.E_l + h_weights * (rhophi_r - rhophi_l - d_etot))
    fluxes = np.stack([c1, cx, cy, c4])
    if degenerate.any():
        mean = np.stack([0.5 * (fl + fr) for fl, fr in zip(F_l, F_r)])
        fluxes = np.where(degenerate, mean, fluxes)
    return fluxes


def imbalance_indicators_2d(eqpx_padded, eqpy_padded, grid: Grid2D, psi_scale: str):
    """Directional steadiness indicators at the x- and y-interfaces.

    The x-interface indicator responds to x-jumps of the x-direction
    equilibrium pressure (and analogously in y), each normalized by its own
    direction's domain length.
    """
    ex = np.asarray(eqpx_padded, float)
    ey = np.asarray(eqpy_padded, float)
    gx = float(np.max(ex[2:-2, 2:-2])) if psi_scale == "global" else None
    gy = float(np.max(ey[2:-2, 2:-2])) if psi_scale == "global" else None
    psi_x = imbalance_indicator_1d(
        ex[1:-2, 2:-2], ex[2:-1, 2:-2], grid.dx, grid.length_x, psi_scale, gx
    )
    psi_y = imbalance_indicator_1d(
        ey[2:-2, 1:-2], ey[2:-2, 2:-1], grid.dy, grid.length_y, psi_scale, gy
    )
    return psi_x, psi_y


def flux_wb_2d(
    iv: InterfaceValues2D,
    speeds: DirectionalSpeeds2D,
    eqpx_padded, eqpy_padded,
    params: CutoffParams,
    phi, grid: Grid2D,
    psi_scale: str = "local",
):
    """Well-balanced fluxes at all interfaces: (4, nx+1, ny) and (4, nx, ny+1)."""
    psi_x, psi_y = imbalance_indicators_2d(eqpx_padded, eqpy_padded, grid, psi_scale)
    fx = _cu_flux_direction(iv.x, speeds.a_plus, speeds.a_minus,
                            cutoff_weight(psi_x, params), phi.phi_iface_x, "x")
    fy = _cu_flux_direction(iv.y, speeds.b_plus, speeds.b_minus,
                            cutoff_weight(psi_y, params), phi.phi_iface_y, "y")
    return fx, fy


def flux_baseline_2d(iv: InterfaceValues2D, speeds: DirectionalSpeeds2D, phi, grid: Grid2D):
    """Plain central-upwind fluxes (the non-well-balanced comparison scheme)."""
    fx = _cu_flux_direction(iv.x, speeds.a_plus, speeds.a_minus, 1.0, phi.phi_iface_x, "x")
    fy = _cu_flux_direction(iv.y, speeds.b_plus, speeds.b_minus, 1.0, phi.phi_iface_y, "y")
    return fx, fy
