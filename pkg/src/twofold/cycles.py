"""Detection of symmetric crossing cycles on the reduced branch coordinate.

A crossing orbit through a first-quadrant point p0 = (x0, y0, 0) closes into
a symmetric cycle exactly when the upper half-orbit lands on the involution
image (-y0, -x0, 0).  With p0 constrained to the conic branch, conservation
of the first integral reduces the two closure equations to one scalar
residual in y0, which a damped Newton iteration drives to zero.  The full
return map (upper half-orbit followed by the lower one) is exposed for
iteration and for finite-difference checks of the monodromy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, NoConvergenceError, NotACycleError
from .invariants import branch_min_y, gamma1_branch_x, gamma1_conic
from .returns import (DEFAULT_SCAN_STEP, DEFAULT_T_MAX, half_return_X,
                      half_return_Y, series_coeffs)
from .system import SystemParams

__all__ = [
    "SymmetricCycle",
    "closure_residual",
    "find_cycle_newton",
    "return_map",
    "iterate_reduced_map",
    "ScanEntry",
    "scan_cycles",
    "asymptotic_seed",
]


@dataclass(frozen=True)
class SymmetricCycle:
    """A converged symmetric crossing cycle.

    p1 is the second crossing, equal to (-y0, -x0) up to the stated residual;
    t_x and t_y are the two half-flight times (equal for a symmetric cycle)
    and T = t_x + t_y the period.
    """

    p0: np.ndarray
    p1: np.ndarray
    T: float
    t_x: float
    t_y: float
    residual: float


def closure_residual(p: SystemParams, y0: float, *, step: float = DEFAULT_SCAN_STEP,
                     t_max: float = DEFAULT_T_MAX) -> np.ndarray:
    """(x1 + y0, y1 + x0) for the upper half-orbit from the branch point at y0.

    Vanishes exactly at a symmetric cycle.
    """
    x0 = gamma1_branch_x(p, y0)
    hrx = half_return_X(p, (x0, y0), step=step, t_max=t_max)
    return np.array([hrx.end[0] + y0, hrx.end[1] + x0])


def _scalar_residual(p, y0, step, t_max):
    x0 = gamma1_branch_x(p, y0)
    hrx = half_return_X(p, (x0, y0), step=step, t_max=t_max)
    return float(hrx.end[0] + y0), hrx, x0


def find_cycle_newton(p: SystemParams, y0_init: float, *, tol: float | None = None,
                      max_iter: int = 50, step: float = DEFAULT_SCAN_STEP,
                      t_max: float = DEFAULT_T_MAX) -> SymmetricCycle:
    """Newton iteration on the scalar closure residual in the branch coordinate.

    The derivative is taken by central differences; steps that fall off the
    branch domain are halved (at most 8 times).  Acceptance requires
    |r| <= tol with tol defaulting to 1e-10 (1 + y0), after which the full
    symmetric-cycle invariants are checked.

    Raises
    ------
    NoConvergenceError
        If the residual is still above tolerance after ``max_iter`` steps.
    NotACycleError
        If the converged point violates a cycle invariant.
    """
    y_floor = branch_min_y(p)
    y0 = float(y0_init)
    if y0 < y_floor:
        y0 = y_floor
    solver = {"step": step, "t_max": t_max}
    r, hrx, x0 = _scalar_residual(p, y0, step, t_max)
    for _ in range(max_iter):
        if abs(r) <= 1e-13 * (1.0 + abs(y0)):
            break
        h = 1e-6 * (1.0 + abs(y0))
        y_minus = max(y0 - h, y_floor)
        rp = _scalar_residual(p, y0 + h, step, t_max)[0]
        rm = _scalar_residual(p, y_minus, step, t_max)[0]
        slope = (rp - rm) / (y0 + h - y_minus)
        if slope == 0.0:
            raise NoConvergenceError("flat closure residual; cannot take a Newton step")
        delta = -r / slope
        trial = y0 + delta
        halvings = 0
        while trial <= y_floor and halvings < 8:
            delta *= 0.5
            trial = y0 + delta
            halvings += 1
        if trial <= y_floor:
            raise NoConvergenceError("Newton step pinned at the branch-domain floor")
        y0 = trial
        r, hrx, x0 = _scalar_residual(p, y0, step, t_max)
    accept = tol if tol is not None else 1e-10 * (1.0 + abs(y0))
    if abs(r) > accept:
        raise NoConvergenceError(
            f"closure residual {r:.3g} above tolerance {accept:.3g} after {max_iter} iterations"
        )
    r2 = float(hrx.end[1] + x0)
    hry = half_return_Y(p, (x0, y0), **solver)
    t_x, t_y = hrx.t, hry.t
    T = t_x + t_y
    p0 = np.array([x0, y0])
    p1 = hrx.end.copy()
    resid_norm = math.hypot(r, r2)
    scale = 1.0 + float(np.max(np.abs(p0)))
    problems = []
    if abs(r2) > 100.0 * accept:
        problems.append(f"second closure component {r2:.3g}")
    if np.max(np.abs(p1 - np.array([-y0, -x0]))) > 1e-8 * scale:
        problems.append("p1 is not the involution image of p0")
    if abs(t_x - t_y) > 1e-9 * T:
        problems.append(f"half times differ: |t_x - t_y| = {abs(t_x - t_y):.3g}")
    conic = gamma1_conic(p)
    if abs(conic.evaluate(*p1)) > 1e-8 * scale * scale:
        problems.append("p1 left the reduced conic")
    if problems:
        raise NotACycleError("; ".join(problems))
    return SymmetricCycle(p0=p0, p1=p1, T=T, t_x=t_x, t_y=t_y, residual=resid_norm)


def return_map(p: SystemParams, q, *, step: float = DEFAULT_SCAN_STEP,
               t_max: float = DEFAULT_T_MAX) -> np.ndarray:
    """Full crossing return map from a first-quadrant point of the plane.

    Composes the forward upper half-orbit with the forward lower half-orbit;
    both endpoint crossings must be transversal.
    """
    q = np.asarray(q, dtype=float)
    if q[0] <= 0 or q[1] <= 0:
        raise ValueError(f"return map orientation expects a first-quadrant point, got {q!r}")
    hrx = half_return_X(p, q, step=step, t_max=t_max)
    hry = half_return_Y(p, hrx.end, step=step, t_max=t_max)
    return hry.end


def iterate_reduced_map(p: SystemParams, y0_init: float, n: int, *,
                        step: float = DEFAULT_SCAN_STEP,
                        t_max: float = DEFAULT_T_MAX) -> list[np.ndarray]:
    """Orbit of the return map seeded on the conic branch.

    Returns the n+1 successive crossing points starting from the branch point
    at y0_init.  Inside the stability region the sequence converges to the
    cycle's fixed point.

    Raises
    ------
    DivergenceError
        If an iterate leaves the crossing quadrant or blows past 1e12.
    """
    y0 = float(y0_init)
    q = np.array([gamma1_branch_x(p, y0), y0])
    orbit = [q.copy()]
    for k in range(n):
        q = return_map(p, q, step=step, t_max=t_max)
        if not np.all(np.isfinite(q)) or q[0] <= 0 or q[1] <= 0 or np.max(np.abs(q)) > 1e12:
            raise DivergenceError(
                f"iterate {k + 1} left the branch domain at {q!r}"
            )
        orbit.append(q.copy())
    return orbit


def asymptotic_seed(p: SystemParams) -> float | None:
    """Large-amplitude seed y0* = -gamma2/gamma1 from the series head.

    None when the head has no positive zero (gamma1/gamma2 >= 0).
    """
    coeffs = series_coeffs(p)
    if coeffs.gamma2 == 0.0:
        return None
    v0 = -coeffs.gamma1 / coeffs.gamma2
    if v0 <= 0.0:
        return None
    return 1.0 / v0


@dataclass(frozen=True)
class ScanEntry:
    H: float
    cycle: SymmetricCycle | None
    monodromy: "object | None"  # stability.MonodromyReport
    error: str | None


def scan_cycles(p_base: SystemParams, H_grid, *, step: float = DEFAULT_SCAN_STEP,
                t_max: float = DEFAULT_T_MAX, threads: int = 1) -> list[ScanEntry]:
    """Cycle catalogue over an H grid at fixed (C, Lambda).

    Each H is attempted independently: the Newton solve is seeded from the
    series head when it predicts a positive zero, otherwise from a coarse
    bracket scan of the closure residual.  Failures are recorded per entry
    and the scan continues.  Entries are independent, so with threads > 1
    they run on a worker pool; the returned order always follows H_grid.
    """
    from .stability import monodromy  # deferred: stability depends on cycle objects
    from .system import resonant_system

    def entry(H: float) -> ScanEntry:
        try:
            p = resonant_system(p_base.C, H, p_base.Lambda)
            seed = asymptotic_seed(p)
            if seed is None:
                seed = _bracket_seed(p, step, t_max)
            cycle = find_cycle_newton(p, seed, step=step, t_max=t_max)
            report = monodromy(p, cycle)
            return ScanEntry(H=H, cycle=cycle, monodromy=report, error=None)
        except Exception as exc:  # per-entry failure, scan continues
            return ScanEntry(H=H, cycle=None, monodromy=None,
                             error=f"{type(exc).__name__}: {exc}")

    hs = [float(H) for H in H_grid]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(entry, hs))
    return [entry(H) for H in hs]


def _bracket_seed(p: SystemParams, step: float, t_max: float) -> float:
    """Coarse log-grid scan of the scalar closure residual for a sign change."""
    lo = branch_min_y(p) * (1.0 + 1e-6) + 1e-9
    ys = np.geomspace(max(lo, 1e-6), 1e6, 60)
    prev_y, prev_r = None, None
    for y in ys:
        try:
            r = _scalar_residual(p, float(y), step, t_max)[0]
        except Exception:
            prev_y, prev_r = None, None
            continue
        if prev_r is not None and prev_r * r < 0:
            return 0.5 * (prev_y + float(y))
        prev_y, prev_r = float(y), r
    raise NoConvergenceError("no sign change of the closure residual on the scan grid")
