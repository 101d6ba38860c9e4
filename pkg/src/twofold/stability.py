"""Saltation-corrected monodromy of symmetric cycles, transverse Floquet
multipliers, Schur-Cohn verdicts, and the asymptotic stability region of the
(C, H) parameter plane.

The monodromy of a crossing cycle composes the two fundamental matrices with
rank-one saltation corrections at the two crossings.  Its spectrum always
contains the trivial multiplier 1 along the orbit direction; deflating it
leaves a quadratic whose coefficients are (tr M - 1, det M), so orbital
stability reduces to three sign conditions on the trace and determinant.
Along the conic branch at large amplitude both invariants have closed-form
limits, which carve the stability band out of the (C, H) plane.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import brentq

from .errors import EmptyBandError, GrazingCrossingError
from .flow import fundamental_X, fundamental_Y
from .invariants import gamma1_discriminant
from .system import INVOLUTION, SystemParams, eval_X, eval_Y

if TYPE_CHECKING:  # pragma: no cover
    from .cycles import SymmetricCycle

__all__ = [
    "saltation",
    "MonodromyReport",
    "monodromy",
    "schur_conditions",
    "schur_verdict",
    "sigma_restriction",
    "m_gamma1",
    "tau_gamma1",
    "asymptotic_invariants",
    "critical_h",
    "h_min",
    "band_width",
    "BandPoint",
    "BandResult",
    "stability_band",
]

_E3 = np.array([0.0, 0.0, 1.0])


def saltation(p: SystemParams, q, direction: str) -> np.ndarray:
    """Jump correction of the linearized flow at a transversal crossing.

    direction "XtoY" uses the incoming upper field's Lie derivative as the
    divisor, "YtoX" the lower one's.  Both are identity plus a rank-one
    update of the third column.
    """
    q = np.asarray(q, dtype=float)
    s3 = np.array([q[0], q[1], 0.0])
    lie_x, lie_y = float(q[1]), float(q[0])
    tol = 1e-10 * (1.0 + float(np.hypot(q[0], q[1])))
    if abs(lie_x) < tol or abs(lie_y) < tol or lie_x * lie_y < 0:
        raise GrazingCrossingError(f"{q!r} is not a transversal crossing point")
    jump = eval_Y(p, s3) - eval_X(p, s3)
    out = np.eye(3)
    if direction == "XtoY":
        out[:, 2] += jump / lie_x
    elif direction == "YtoX":
        out[:, 2] -= jump / lie_y
    else:
        raise ValueError(f"direction must be 'XtoY' or 'YtoX', got {direction!r}")
    return out


@dataclass(frozen=True)
class MonodromyReport:
    matrix: np.ndarray
    trace: float
    det: float
    multipliers: tuple  # (1, mu2, mu3); mu1 = 1 is exact by deflation
    trivial_residual: float
    reduction_residual: float
    schur: tuple  # three booleans
    stable: bool


def _deflated_quadratic_roots(trace: float, det: float):
    """Roots of mu^2 - (tr - 1) mu + det, the transverse quadratic."""
    b = trace - 1.0
    disc = b * b - 4.0 * det
    if disc >= 0:
        sq = math.sqrt(disc)
        # pair the larger-magnitude root with the stable formula
        r1 = (b + sq) / 2.0 if b >= 0 else (b - sq) / 2.0
        r2 = det / r1 if r1 != 0.0 else (b - sq) / 2.0
        return complex(r1), complex(r2)
    sq = cmath.sqrt(complex(disc))
    return (b + sq) / 2.0, (b - sq) / 2.0


def schur_conditions(trace: float, det: float) -> tuple:
    """The three sign conditions placing both transverse roots in the unit disk."""
    return (1.0 - det > 0.0,
            2.0 - trace + det > 0.0,
            trace + det > 0.0)


def schur_verdict(report: "MonodromyReport") -> tuple:
    """(three booleans, stable flag) for a monodromy report."""
    conds = schur_conditions(report.trace, report.det)
    return conds + (all(conds),)


def monodromy(p: SystemParams, cycle: "SymmetricCycle") -> MonodromyReport:
    """Saltation-corrected monodromy of a converged symmetric cycle.

    Composes S_{Y->X}(p0) Phi_Y(t_y) S_{X->Y}(p1) Phi_X(t_x) and checks the
    equivalent single-flow composition obtained by conjugating the lower
    fundamental matrix with the involution at t = T/2; the two must agree to
    1e-9 relative.
    """
    p0, p1 = cycle.p0, cycle.p1
    s_in = saltation(p, p0, "YtoX")
    s_out = saltation(p, p1, "XtoY")
    M = s_in @ fundamental_Y(p, cycle.t_y).matrix @ s_out @ fundamental_X(p, cycle.t_x).matrix
    half = fundamental_X(p, cycle.T / 2.0).matrix
    M_red = s_in @ INVOLUTION @ half @ INVOLUTION @ s_out @ half
    scale = float(np.max(np.abs(M)))
    reduction_residual = float(np.max(np.abs(M - M_red))) / scale
    if reduction_residual > 1e-9:
        raise ArithmeticError(
            f"direct and involution-reduced compositions disagree: {reduction_residual:.3g}"
        )
    z0 = eval_X(p, np.array([p0[0], p0[1], 0.0]))
    trivial_residual = float(np.linalg.norm(M @ z0 - z0) / np.linalg.norm(z0))
    trace = float(np.trace(M))
    det = float(np.linalg.det(M))
    mu2, mu3 = _deflated_quadratic_roots(trace, det)
    conds = schur_conditions(trace, det)
    return MonodromyReport(
        matrix=M,
        trace=trace,
        det=det,
        multipliers=(complex(1.0), mu2, mu3),
        trivial_residual=trivial_residual,
        reduction_residual=reduction_residual,
        schur=conds,
        stable=all(conds),
    )


def sigma_restriction(p: SystemParams, M: np.ndarray, p0) -> np.ndarray:
    """2x2 derivative of the plane return map induced by a monodromy matrix.

    M is the period variational matrix on R^3 and does not fix the switching
    plane; projecting along the flow direction at p0 restores the return
    map's tangent action, whose eigenvalues are the transverse multipliers.
    """
    p0 = np.asarray(p0, dtype=float)
    z0 = eval_X(p, np.array([p0[0], p0[1], 0.0]))
    proj = np.eye(3) - np.outer(z0, _E3) / z0[2]
    return (proj @ np.asarray(M))[:2, :2]


# ---------------------------------------------------------------------------
# closed-form large-amplitude invariants and the stability band


def m_gamma1(H):
    """Asymptotic slope y0/x0 of the conic branch; |m| < 1 on the hyperbola range."""
    return 2.0 * H / (H + np.sqrt(gamma1_discriminant(H)) + 1.0)


def tau_gamma1(C, H):
    """Large-amplitude limit of the monodromy trace on the branch (0 < H < 1)."""
    sd = np.sqrt(gamma1_discriminant(H))
    m2 = m_gamma1(H) ** 2
    psi_2 = -(H + 1.0) * (H - sd - 3.0) / 2.0
    psi_m1 = (H * H - 1.0) * ((H + 1.0) * sd - (H - 1.0) ** 2 + 2.0) / (H * H)
    psi_m4 = ((H + 1.0) * sd - (H - 1.0) ** 2 + 2.0) / 2.0
    pi_c = np.pi * np.asarray(C, dtype=float)
    return m2 * (psi_2 * np.exp(2.0 * pi_c) + psi_m1 * np.exp(-pi_c)
                 + psi_m4 * np.exp(-4.0 * pi_c))


def asymptotic_invariants(p: SystemParams):
    """(m^2, tau_inf): large-amplitude limits of det M and tr M."""
    if not p.resonant:
        raise ValueError("asymptotic invariants require the resonant family")
    if not 0.0 < p.H < 1.0:
        raise ValueError(f"asymptotic invariants require 0 < H < 1, got H={p.H}")
    return float(m_gamma1(p.H) ** 2), float(tau_gamma1(p.C, p.H))


def critical_h(C):
    """Upper stability boundary H_crit(C) = 1 / (2 cosh(pi C) - 1)."""
    return 1.0 / (2.0 * np.cosh(np.pi * np.asarray(C, dtype=float)) - 1.0)


def _lower_margin(C: float, H: float) -> float:
    return float(tau_gamma1(C, H) + m_gamma1(H) ** 2)


def h_min(C: float) -> float:
    """Lower stability boundary in H at fixed C > 0, located by bisection."""
    hc = float(critical_h(C))
    lo = 1e-9
    if _lower_margin(C, lo) >= 0.0 or _lower_margin(C, hc) <= 0.0:
        raise EmptyBandError(f"no lower boundary bracket in (0, H_crit) at C={C}")
    return float(brentq(lambda h: _lower_margin(C, h), lo, hc, xtol=1e-14))


def band_width(C: float) -> float:
    """Width H_crit(C) - H_min(C) of the stable H-interval at fixed C."""
    width = float(critical_h(C)) - h_min(C)
    if width <= 0.0:
        raise EmptyBandError(f"empty stability interval at C={C}")
    return width


@dataclass(frozen=True)
class BandPoint:
    C: float
    H: float
    m2: float
    tau_inf: float
    inequalities: tuple  # (1 - m^2 > 0, 2 + m^2 - tau > 0, tau + m^2 > 0)
    inside: bool


@dataclass(frozen=True)
class BandResult:
    points: list
    upper: np.ndarray   # (n, 2) polyline (C, H) of 2 + m^2 - tau = 0
    lower: np.ndarray   # (n, 2) polyline (C, H) of tau + m^2 = 0
    hcrit: np.ndarray   # (n, 2) closed-form curve H_crit(C)


def stability_band(c_range, h_range, grid, threads: int = 1) -> BandResult:
    """Evaluate the asymptotic stability inequalities on a (C, H) grid.

    Parameters
    ----------
    c_range, h_range : (float, float)
        Inclusive axis ranges; requires C > 0 and 0 < H < 1.
    grid : int or (int, int)
        Point count per axis, or separate (n_c, n_h) counts.
    threads : int
        Columns are independent; with threads > 1 they are distributed over
        a worker pool and merged back in grid order, so the output is
        identical to the serial run.

    Returns
    -------
    BandResult
        All grid points with their inequality flags, plus the two boundary
        polylines (sign-change interpolation of the margins along each C
        column) and the closed-form critical curve.
    """
    if np.isscalar(grid):
        n_c = n_h = int(grid)
    else:
        n_c, n_h = int(grid[0]), int(grid[1])
    if n_c < 2 or n_h < 2:
        raise ValueError("grid counts must be at least 2")
    c_lo, c_hi = float(c_range[0]), float(c_range[1])
    h_lo, h_hi = float(h_range[0]), float(h_range[1])
    if c_lo <= 0.0:
        raise ValueError("the asymptotic band is established for C > 0")
    if not (0.0 < h_lo < h_hi < 1.0):
        raise ValueError("H range must satisfy 0 < hmin < hmax < 1")
    cs = np.linspace(c_lo, c_hi, n_c)
    hs = np.linspace(h_lo, h_hi, n_h)
    m2s = m_gamma1(hs) ** 2

    def column(C: float):
        taus = tau_gamma1(C, hs)
        upper_margin = 2.0 + m2s - taus
        lower_margin = taus + m2s
        pts = []
        for j, H in enumerate(hs):
            conds = (bool(1.0 - m2s[j] > 0.0),
                     bool(upper_margin[j] > 0.0),
                     bool(lower_margin[j] > 0.0))
            pts.append(BandPoint(float(C), float(H), float(m2s[j]),
                                 float(taus[j]), conds, all(conds)))
        return (pts,
                _interpolate_zero(hs, upper_margin),
                _interpolate_zero(hs, lower_margin))

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(column, cs))
    else:
        columns = [column(C) for C in cs]

    points: list = []
    upper_pts, lower_pts = [], []
    for C, (pts, up, low) in zip(cs, columns):
        points.extend(pts)
        if up is not None:
            upper_pts.append((float(C), up))
        if low is not None:
            lower_pts.append((float(C), low))
    hcrit = np.column_stack([cs, critical_h(cs)])
    return BandResult(
        points=points,
        upper=np.array(upper_pts).reshape(-1, 2),
        lower=np.array(lower_pts).reshape(-1, 2),
        hcrit=hcrit,
    )


def _interpolate_zero(hs: np.ndarray, margin: np.ndarray):
    """H of the first sign change of margin along the column, linearly interpolated."""
    sign_change = np.flatnonzero(margin[:-1] * margin[1:] < 0.0)
    if sign_change.size == 0:
        return None
    i = int(sign_change[0])
    m0, m1 = margin[i], margin[i + 1]
    return float(hs[i] + m0 * (hs[i + 1] - hs[i]) / (m0 - m1))
