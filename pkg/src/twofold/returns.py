"""Half-return flight times through either half-space, their large-amplitude
expansions, and the time-matching function whose zeros are symmetric cycles.

Solver contract: the first crossing of z(t) is bracketed by scanning the
closed-form z along a fixed grid (default step pi/64) and the bracket is
closed with Brent's method; entry and exit transversality are enforced.  The
z component of each piece is e^{Ct} times a frequency-1 oscillation plus a
constant, so it has O(1) sign changes per pi and the default step cannot
skip the first crossing in the crossing regime.  The step is configurable
for exotic parameter ranges.

Time direction is inferred from the queried point: a start the field pushes
into its own half-space is solved forward; a start the field's half-orbit
arrives at is solved backward.  Either way the flight time is positive and
the orbit stays in the correct half-space during the flight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import flow
from .errors import NoReturnError, TangentialGrazeError
from .invariants import gamma1_branch_x, gamma1_discriminant
from .system import SystemParams

__all__ = [
    "HalfReturn",
    "half_return_X",
    "half_return_Y",
    "SeriesCoeffs",
    "series_coeffs",
    "time_matching",
    "time_matching_table",
    "gamma2_at_critical",
    "DEFAULT_SCAN_STEP",
    "DEFAULT_T_MAX",
]

DEFAULT_SCAN_STEP = math.pi / 64
DEFAULT_T_MAX = 8 * math.pi


@dataclass(frozen=True)
class HalfReturn:
    """One half-orbit between two switching-plane crossings.

    ``t`` is the positive flight duration.  ``forward`` records the time
    direction of the solve from ``start``: when False, the half-orbit runs
    from ``end`` to ``start`` in forward time.
    """

    t: float
    start: np.ndarray
    end: np.ndarray
    field: str
    forward: bool
    iterations: int
    residual: float


def first_crossing(zfun, dzfun, t_max: float, step: float, scale: float,
                   skip_zero_start: bool = True):
    """First positive root of zfun, where zfun > 0 during the flight.

    Returns (t, iterations).  Raises NoReturnError if no sign change occurs
    in (0, t_max], TangentialGrazeError if the exit slope is below the
    scale-aware tangency tolerance.
    """
    if t_max <= 0:
        raise NoReturnError("empty search window")
    ts = np.arange(step, t_max + 0.5 * step, step)
    if ts.size == 0:
        ts = np.array([t_max])
    zs = zfun(ts)
    neg = np.flatnonzero(zs <= 0.0)
    if neg.size == 0:
        raise NoReturnError(f"no crossing of z = 0 within (0, {t_max:.6g}]")
    i = int(neg[0])
    lo = ts[i - 1] if i > 0 else (step * 1e-6 if skip_zero_start else 0.0)
    hi = ts[i]
    if zfun(lo) <= 0.0:
        raise TangentialGrazeError("entry into the half-space is not transversal")
    if zs[i] == 0.0:
        root, iterations = float(hi), 0
    else:
        root, info = brentq(zfun, lo, hi, xtol=1e-15, rtol=8.9e-16, full_output=True)
        iterations = info.iterations
    if abs(dzfun(root)) < 1e-10 * (1.0 + scale):
        raise TangentialGrazeError(
            f"exit transversality |dz/dt| = {abs(dzfun(root)):.3g} below tolerance"
        )
    return float(root), iterations


def _half_return(p: SystemParams, start, field: str, lie: float,
                 step: float, t_max: float) -> HalfReturn:
    q = np.asarray(start, dtype=float)[:2]
    scale = float(np.hypot(q[0], q[1]))
    if abs(lie) < 1e-10 * (1.0 + scale):
        raise TangentialGrazeError(
            f"start {q!r} is tangential for the {field} field"
        )
    s0 = np.array([q[0], q[1], 0.0])
    z, dz = flow.z_closed_form(p, s0, field)
    # orient so the solved function is positive during the flight
    if field == "X":
        forward = lie > 0  # ascending starts open the upper half-orbit
        zsign = 1.0
    else:
        forward = lie < 0  # descending starts open the lower half-orbit
        zsign = -1.0
    tsign = 1.0 if forward else -1.0
    g = lambda t: zsign * z(tsign * t)
    dg = lambda t: zsign * tsign * dz(tsign * t)
    t, iterations = first_crossing(g, dg, t_max, step, scale)
    t_signed = tsign * t
    end3 = flow.flow_X(p, s0, t_signed) if field == "X" else flow.flow_Y(p, s0, t_signed)
    return HalfReturn(
        t=t,
        start=q.copy(),
        end=end3[:2].copy(),
        field=field,
        forward=forward,
        iterations=iterations,
        residual=abs(float(end3[2])),
    )


def half_return_X(p: SystemParams, start, *, step: float = DEFAULT_SCAN_STEP,
                  t_max: float = DEFAULT_T_MAX) -> HalfReturn:
    """Flight of the upper half-orbit attached to ``start`` = (x, y).

    For y > 0 the orbit leaves ``start`` forward in time; for y < 0 it
    arrives at ``start`` and the solve runs backward.  The returned time is
    the positive flight duration and ``end`` the other crossing point.
    """
    q = np.asarray(start, dtype=float)
    return _half_return(p, q, "X", float(q[1]), step, t_max)


def half_return_Y(p: SystemParams, start, *, step: float = DEFAULT_SCAN_STEP,
                  t_max: float = DEFAULT_T_MAX) -> HalfReturn:
    """Flight of the lower half-orbit attached to ``start`` = (x, y).

    For x < 0 the orbit leaves ``start`` forward in time; for x > 0 it
    arrives at ``start`` (this is the orientation that closes a symmetric
    cycle from a first-quadrant point) and the solve runs backward.
    """
    q = np.asarray(start, dtype=float)
    return _half_return(p, q, "Y", float(q[0]), step, t_max)


@dataclass(frozen=True)
class SeriesCoeffs:
    """Leading terms of the desingularized flight times at large amplitude.

    With v0 = 1/y0 along the conic branch, the shifted X time t^X - pi
    expands as gamma1_x v0 + gamma2_x v0^2 + O(v0^3), and the shifted
    (backward) Y time u^Y - pi as gamma1_y v0 + gamma2_y v0^2 + O(v0^3).
    """

    gamma1_x: float
    gamma2_x: float
    gamma1_y: float
    gamma2_y: float

    @property
    def gamma1(self) -> float:
        return self.gamma1_x - self.gamma1_y

    @property
    def gamma2(self) -> float:
        return self.gamma2_x - self.gamma2_y

    def tau_x_head(self, v0):
        return self.gamma1_x * v0 + self.gamma2_x * v0 * v0

    def tau_y_head(self, v0):
        return self.gamma1_y * v0 + self.gamma2_y * v0 * v0

    def tau_head(self, v0):
        return self.gamma1 * v0 + self.gamma2 * v0 * v0


def series_coeffs(p: SystemParams) -> SeriesCoeffs:
    """Closed-form expansion coefficients (resonant hyperbola range only)."""
    if not p.resonant:
        raise ValueError("series coefficients require the resonant family A = -2C")
    if not (-1.0 / 3.0 < p.H < 1.0):
        raise ValueError("series coefficients require the hyperbola range -1/3 < H < 1")
    if p.H == 0.0:
        raise ValueError("series coefficients are singular at H = 0")
    C, H, L = p.C, p.H, p.Lambda
    c2 = C * C + 1.0
    E = math.exp(math.pi * C)
    g1x = (1.0 + 1.0 / E) * L / c2
    g2x = -C * g1x * g1x
    sd = math.sqrt(gamma1_discriminant(H) / (H * H)) * H
    g1y = 2.0 * H * L * (E + 1.0) / (c2 * (sd + H + 1.0))
    g2y = (-2.0 * C * H * H * L * L * (E + 1.0) * (sd - (3.0 * H + 1.0) * E)
           / (c2 * c2 * (3.0 * H + 1.0)
              * ((H + 1.0) * sd + 1.0 + 2.0 * H - H * H)))
    return SeriesCoeffs(g1x, g2x, g1y, g2y)


def time_matching(p: SystemParams, v0: float, *, step: float = DEFAULT_SCAN_STEP,
                  t_max: float = DEFAULT_T_MAX) -> float:
    """tau(v0): difference of the shifted flight times from the branch point.

    tau(v0) = (t^X - pi) - (u^Y - pi) where both half-returns are taken from
    the branch point with y0 = 1/v0; its zeros are the symmetric cycles.
    """
    if v0 <= 0:
        raise ValueError("v0 must be positive")
    y0 = 1.0 / v0
    x0 = gamma1_branch_x(p, y0)
    hrx = half_return_X(p, (x0, y0), step=step, t_max=t_max)
    hry = half_return_Y(p, (x0, y0), step=step, t_max=t_max)
    return hrx.t - hry.t


def time_matching_table(p: SystemParams, v0_values, *, step: float = DEFAULT_SCAN_STEP,
                        t_max: float = DEFAULT_T_MAX) -> list[dict]:
    """Numeric vs series flight-time shifts for each v0 (CSV-friendly rows)."""
    coeffs = series_coeffs(p)
    rows = []
    for v0 in v0_values:
        y0 = 1.0 / float(v0)
        x0 = gamma1_branch_x(p, y0)
        hrx = half_return_X(p, (x0, y0), step=step, t_max=t_max)
        hry = half_return_Y(p, (x0, y0), step=step, t_max=t_max)
        tau_x = hrx.t - math.pi
        tau_y = hry.t - math.pi
        rows.append({
            "v0": float(v0),
            "tau_x_numeric": tau_x,
            "tau_x_series": coeffs.tau_x_head(v0),
            "tau_y_numeric": tau_y,
            "tau_y_series": coeffs.tau_y_head(v0),
            "tau": tau_x - tau_y,
        })
    return rows


def gamma2_at_critical(C: float, Lambda: float) -> float:
    """Second matching coefficient at the critical slope H_crit(C).

    The first coefficient vanishes there; this one does not, for any C != 0,
    which makes the zero of the matching function isolated.
    """
    if C == 0.0:
        raise ValueError("C must be nonzero")
    c2 = C * C + 1.0
    if C > 0:
        return (-2.0 * Lambda * Lambda * C
                * (math.exp(-math.pi * C) + 1.0 + math.exp(-2.0 * math.pi * C)) / (c2 * c2))
    return (-C * Lambda * Lambda
            * (1.0 + 2.0 * math.exp(-C * math.pi) - math.exp(2.0 * C * math.pi)
               + math.exp(-2.0 * C * math.pi) + math.exp(4.0 * C * math.pi)
               + 2.0 * math.exp(3.0 * C * math.pi)) / (c2 * c2))
