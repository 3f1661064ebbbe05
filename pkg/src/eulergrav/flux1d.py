"""One-dimensional central-upwind numerical fluxes.

The physical flux is the global-flux form (rho*v, rho*v^2 + eqp, v*(E + rho*phi + p)),
where eqp = p + load absorbs the gravity source into the momentum flux.  The
well-balanced variant gates the anti-diffusion of the density and energy
components by a smooth cutoff that vanishes where the equilibrium pressure is
locally flat, so motionless hydrostatic states yield interface-independent
fluxes and an exactly zero right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SolverError

# Speed gap below which an interface is treated as quiescent: the flux
# degenerates to the arithmetic mean with no diffusion.
DEGENERATE_SPEED_GAP = 1e-10


@dataclass(frozen=True)
class SpeedPair:
    """One-sided local speed bounds per interface: b_plus >= 0 >= b_minus."""

    b_plus: np.ndarray
    b_minus: np.ndarray


@dataclass(frozen=True)
class CutoffParams:
    """Gain and (even) exponent of the steadiness cutoff weight."""

    gain: float = 200.0
    exponent: int = 6

    def __post_init__(self):
        if not self.gain > 0:
            raise ValueError("gain must be positive")
        if self.exponent < 2 or self.exponent % 2:
            raise ValueError("exponent must be an even integer >= 2")


def local_speeds(v_l, c_l, v_r, c_r) -> SpeedPair:
    """Extreme characteristic speeds of the two one-sided states, clamped at zero."""
    v_l, c_l, v_r, c_r = map(np.asarray, (v_l, c_l, v_r, c_r))
    b_plus = np.maximum(np.maximum(v_l + c_l, v_r + c_r), 0.0)
    b_minus = np.minimum(np.minimum(v_l - c_l, v_r - c_r), 0.0)
    return SpeedPair(b_plus, b_minus)


def cutoff_weight(indicator, params: CutoffParams):
    """Smooth switch in [0, 1): zero at local steadiness, ~1 away from it."""
    x = np.asarray(indicator, dtype=float)
    with np.errstate(over="ignore"):
        t = (params.gain * x) ** params.exponent
    out = np.where(np.isfinite(t), t / (1.0 + t), 1.0)
    return out if out.ndim else float(out)


def imbalance_indicator_1d(eqp_lo, eqp_hi, dy: float, domain_length: float,
                           scale: str = "local", global_scale: float | None = None):
    """Dimensionless jump of the centered equilibrium pressure across an interface.

    ``scale == "local"`` normalizes by the larger of the two adjacent values;
    ``scale == "global"`` by a field-wide maximum supplied by the caller.
    """
    eqp_lo = np.asarray(eqp_lo, float)
    eqp_hi = np.asarray(eqp_hi, float)
    if scale == "local":
        denom = np.maximum(eqp_lo, eqp_hi)
    elif scale == "global":
        if global_scale is None:
            global_scale = float(np.max(np.maximum(eqp_lo, eqp_hi)))
        denom = np.asarray(global_scale, float)
    else:
        raise ValueError(f"unknown scale {scale!r}")
    if np.any(denom <= 0.0):
        raise SolverError("equilibrium pressure scale must be positive")
    return np.abs(eqp_hi - eqp_lo) / dy * (domain_length / denom)


def physical_flux_1d(rho, mom, etot, v, p, E, eqp, phi_iface):
    """Global-flux form evaluated from one-sided interface values."""
    return (mom, mom * v + eqp, v * (E + rho * phi_iface + p))


def _minmod2(a, b):
    return np.where(a * b > 0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def _antidiffusion(q_l, q_r, G_l, G_r, b_plus, b_minus, gap, degenerate):
    """Limited anti-diffusion per component; zero where the speed gap degenerates."""
    out = []
    with np.errstate(invalid="ignore", divide="ignore"):
        for ql, qr, gl, gr in zip(q_l, q_r, G_l, G_r):
            qstar = (b_plus * qr - b_minus * ql - (gr - gl)) / gap
            d = _minmod2(qr - qstar, qstar - ql)
            out.append(np.where(degenerate, 0.0, d))
    return tuple(out)


def antidiffusion_1d(q_l, q_r, flux_of, speeds: SpeedPair):
    """Anti-diffusion corrections from one-sided states and a physical flux evaluator.

    ``q_l``/``q_r`` are tuples of component arrays; ``flux_of`` maps such a
    tuple to the tuple of physical flux components.
    """
    gap = speeds.b_plus - speeds.b_minus
    degenerate = gap < DEGENERATE_SPEED_GAP
    safe_gap = np.where(degenerate, 1.0, gap)
    return _antidiffusion(q_l, q_r, flux_of(q_l), flux_of(q_r),
                          speeds.b_plus, speeds.b_minus, safe_gap, degenerate)


def central_upwind_flux_1d(iv, speeds: SpeedPair, h_weights, phi_iface):
    """Central-upwind flux with the anti-diffusion of the density and energy
    components scaled by ``h_weights`` (1 everywhere recovers the plain flux).

    Returns the three flux components as arrays over the interfaces.
    """
    bp, bm = speeds.b_plus, speeds.b_minus
    gap = bp - bm
    degenerate = gap < DEGENERATE_SPEED_GAP
    safe = np.where(degenerate, 1.0, gap)

    G_l = physical_flux_1d(iv.rho_l, iv.mom_l, iv.etot_l, iv.v_l, iv.p_l, iv.E_l, iv.eqp_l, phi_iface)
    G_r = physical_flux_1d(iv.rho_r, iv.mom_r, iv.etot_r, iv.v_r, iv.p_r, iv.E_r, iv.eqp_r, phi_iface)

    q_l = (iv.rho_l, iv.mom_l, iv.etot_l)
    q_r = (iv.rho_r, iv.mom_r, iv.etot_r)
    d_rho, d_mom, d_etot = _antidiffusion(q_l, q_r, G_l, G_r, bp, bm, safe, degenerate)

    beta = bp * bm / safe
    rhophi_l = iv.rho_l * phi_iface
    rhophi_r = iv.rho_r * phi_iface

    f1 = (bp * G_l[0] - bm * G_r[0]) / safe + beta * h_weights * (iv.rho_r - iv.rho_l - d_rho)
    f2 = (bp * G_l[1] - bm * G_r[1]) / safe + beta * (iv.mom_r - iv.mom_l - d_mom)
    f3 = (bp * G_l[2] - bm * G_r[2]) / safe + beta * (
        iv.E_r - iv.E_l + h_weights * (rhophi_r - rhophi_l - d_etot)
    )
    fluxes = np.stack([f1, f2, f3])
    if degenerate.any():
        mean = np.stack([0.5 * (gl + gr) for gl, gr in zip(G_l, G_r)])
        fluxes = np.where(degenerate, mean, fluxes)
    return fluxes


def flux_wb_1d(iv, speeds: SpeedPair, psi, params: CutoffParams, phi_iface):
    """Well-balanced flux: cutoff-gated anti-diffusion on density and energy."""
    return central_upwind_flux_1d(iv, speeds, cutoff_weight(psi, params), phi_iface)


def flux_baseline_1d(iv, speeds: SpeedPair, phi_iface):
    """Plain central-upwind flux (no steadiness gating)."""
    return central_upwind_flux_1d(iv, speeds, 1.0, phi_iface)
