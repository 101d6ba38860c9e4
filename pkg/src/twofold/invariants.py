"""Darboux polynomials, the first integrals of both pieces, and the reduced
conic on the switching plane.

Each linear piece has two Darboux polynomials: a quadratic whose zero set is
the focal plane's companion cylinder and an affine one whose zero set is the
invariant focal plane itself (W^X: x = H(Az + y), W^Y: y = H(Az + x)).  Their
Darboux product is a first integral; in the resonant regime A = -2C the
exponent collapses to 1 and the integral is polynomial.  Matching the
integral values at a point (x, y, 0) and at its involution image (-y, -x, 0)
factors through a single conic, whose positive branch carries every
symmetric-cycle crossing at large amplitude.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .system import REL_TOL, SystemParams, eval_X, eval_Y

__all__ = [
    "DarbouxPair",
    "DarbouxReport",
    "eval_P_X",
    "eval_P_Y",
    "verify_darboux",
    "ConicKind",
    "ConicGamma1",
    "gamma1_conic",
    "gamma1_discriminant",
    "gamma1_branch_x",
    "branch_min_y",
]


@dataclass(frozen=True)
class DarbouxPair:
    """Darboux polynomials of both fields with their cofactors."""

    params: SystemParams

    # upper field: X(f1) = 2C f1, X(f2) = A f2
    def f1(self, s) -> float:
        x, y, z = np.asarray(s, dtype=float)
        C, L = self.params.C, self.params.Lambda
        c2 = C * C + 1.0
        return (y * y + 2.0 * C * (z + L / c2) * y + c2 * z * z
                + 2.0 * L * (C * C - 1.0) * z / c2 + L * L / c2)

    def f2(self, s) -> float:
        x, y, z = np.asarray(s, dtype=float)
        return x - self.params.H * (self.params.A * z + y)

    # lower field: Y(F1) = 2c F1, Y(F2) = a F2
    def F1(self, s) -> float:
        x, y, z = np.asarray(s, dtype=float)
        c, lam = self.params.c, self.params.lam
        c2 = c * c + 1.0
        return (x * x + 2.0 * c * (z + lam / c2) * x + c2 * z * z
                + 2.0 * lam * (c * c - 1.0) * z / c2 + lam * lam / c2)

    def F2(self, s) -> float:
        # z = 0 trace is the focal line y = h x
        x, y, z = np.asarray(s, dtype=float)
        return y - self.params.h * (self.params.a * z + x)

    @property
    def cofactor_f1(self) -> float:
        return 2.0 * self.params.C

    @property
    def cofactor_f2(self) -> float:
        return self.params.A

    @property
    def cofactor_F1(self) -> float:
        return 2.0 * self.params.c

    @property
    def cofactor_F2(self) -> float:
        return self.params.a

    def gradient_f1(self, s) -> np.ndarray:
        x, y, z = np.asarray(s, dtype=float)
        C, L = self.params.C, self.params.Lambda
        c2 = C * C + 1.0
        return np.array([
            0.0,
            2.0 * y + 2.0 * C * (z + L / c2),
            2.0 * C * y + 2.0 * c2 * z + 2.0 * L * (C * C - 1.0) / c2,
        ])

    def gradient_f2(self, s) -> np.ndarray:
        H, A = self.params.H, self.params.A
        return np.array([1.0, -H, -H * A])

    def gradient_F1(self, s) -> np.ndarray:
        x, y, z = np.asarray(s, dtype=float)
        c, lam = self.params.c, self.params.lam
        c2 = c * c + 1.0
        return np.array([
            2.0 * x + 2.0 * c * (z + lam / c2),
            0.0,
            2.0 * c * x + 2.0 * c2 * z + 2.0 * lam * (c * c - 1.0) / c2,
        ])

    def gradient_F2(self, s) -> np.ndarray:
        h, a = self.params.h, self.params.a
        return np.array([-h, 1.0, -h * a])


def _power_exponent(p: SystemParams) -> float:
    return -2.0 * p.C / p.A


def _guarded_power(base: float, exponent: float) -> float:
    if base > 0.0:
        return base ** exponent
    rounded = round(exponent)
    if abs(exponent - rounded) <= REL_TOL:
        return base ** int(rounded)
    raise ValueError(
        f"first integral undefined: base {base!r} <= 0 with non-integer exponent {exponent!r}"
    )


def eval_P_X(p: SystemParams, s) -> float:
    """First integral of the upper field, f1 * f2^(-2C/A).

    In the resonant family the exponent is exactly 1 and the product is a
    polynomial; otherwise the power is guarded and raises on a nonpositive
    base with non-integer exponent.
    """
    pair = DarbouxPair(p)
    if p.resonant:
        return pair.f1(s) * pair.f2(s)
    return pair.f1(s) * _guarded_power(pair.f2(s), _power_exponent(p))


def eval_P_Y(p: SystemParams, s) -> float:
    """First integral of the lower field, F1 * F2^(-2c/a)."""
    pair = DarbouxPair(p)
    if p.resonant:
        return pair.F1(s) * pair.F2(s)
    return pair.F1(s) * _guarded_power(pair.F2(s), _power_exponent(p))


@dataclass(frozen=True)
class DarbouxReport:
    max_residual_f1: float
    max_residual_f2: float
    max_residual_F1: float
    max_residual_F2: float
    cofactor_combination: float
    samples: int


def verify_darboux(p: SystemParams, samples: int = 1000, seed: int = 0,
                   box: float = 3.0) -> DarbouxReport:
    """Check the Darboux property of all four polynomials on a random sample.

    For each polynomial g with cofactor k the residual is
    |grad g . field - k g|, evaluated with the analytic gradients.  Also
    reports the cofactor combination 1*(2C) + (-2C/A)*A, which vanishes
    identically and makes the Darboux product a first integral.
    """
    pair = DarbouxPair(p)
    rng = np.random.default_rng(seed)
    worst = [0.0, 0.0, 0.0, 0.0]
    for _ in range(samples):
        s = rng.uniform(-box, box, 3)
        vx, vy = eval_X(p, s), eval_Y(p, s)
        worst[0] = max(worst[0], abs(pair.gradient_f1(s) @ vx - pair.cofactor_f1 * pair.f1(s)))
        worst[1] = max(worst[1], abs(pair.gradient_f2(s) @ vx - pair.cofactor_f2 * pair.f2(s)))
        worst[2] = max(worst[2], abs(pair.gradient_F1(s) @ vy - pair.cofactor_F1 * pair.F1(s)))
        worst[3] = max(worst[3], abs(pair.gradient_F2(s) @ vy - pair.cofactor_F2 * pair.F2(s)))
    combo = 1.0 * (2.0 * p.C) + _power_exponent(p) * p.A
    return DarbouxReport(*worst, cofactor_combination=combo, samples=samples)


class ConicKind(enum.Enum):
    LINE_PAIR = "line_pair"
    PARABOLA = "parabola"
    HYPERBOLA = "hyperbola"
    ELLIPSE = "ellipse"


def gamma1_discriminant(H):
    """Discriminant (1 - H)(3H + 1) of the reduced conic's quadratic part."""
    return (1.0 - H) * (3.0 * H + 1.0)


@dataclass(frozen=True)
class ConicGamma1:
    """The reduced conic on the switching plane, as a quadratic form.

    coefficients = (axx, axy, ayy, bx, by, c) for
    axx x^2 + axy x y + ayy y^2 + bx x + by y + c = 0.
    """

    coefficients: tuple
    discriminant: float
    kind: ConicKind

    def evaluate(self, x, y):
        axx, axy, ayy, bx, by, c = self.coefficients
        return axx * x * x + axy * x * y + ayy * y * y + bx * x + by * y + c

    def to_json_dict(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "discriminant": self.discriminant,
            "kind": self.kind.value,
        }


def _conic_kind(H: float) -> ConicKind:
    # exact comparisons: the transitions sit exactly at H = 1 and H = -1/3
    if H == 1.0:
        return ConicKind.LINE_PAIR
    if H == -1.0 / 3.0:
        return ConicKind.PARABOLA
    if -1.0 / 3.0 < H < 1.0:
        return ConicKind.HYPERBOLA
    return ConicKind.ELLIPSE


def gamma1_conic(p: SystemParams) -> ConicGamma1:
    """Conic containing the symmetric-cycle crossings (resonant family only)."""
    if not p.resonant:
        raise ValueError("the reduced conic requires the resonant family A = -2C")
    C, H, L = p.C, p.H, p.Lambda
    c2 = C * C + 1.0
    coeffs = (
        H,
        -(H + 1.0),
        H,
        -2.0 * C * H * L / c2,
        2.0 * C * H * L / c2,
        L * L * (H - 1.0) / c2,
    )
    return ConicGamma1(coeffs, gamma1_discriminant(H), _conic_kind(H))


def _branch_radicand(p: SystemParams, y):
    C, H, L = p.C, p.H, p.Lambda
    c2 = C * C + 1.0
    d1 = gamma1_discriminant(H)
    return (d1 * y * y / (4.0 * H * H)
            + L * C * (1.0 - H) * y / (H * c2)
            + L * L * (c2 - H) / (H * c2 * c2))


def gamma1_branch_x(p: SystemParams, y: float) -> float:
    """x(y) on the first-quadrant branch of the conic (0 < H < 1).

    The mirror branch is obtained via the involution.  Radicands within
    -1e-12 of zero are clamped to protect the intercept endpoints.  The
    result is checked by substitution into the conic.
    """
    if not p.resonant:
        raise ValueError("branch parametrization requires the resonant family")
    if not 0.0 < p.H < 1.0:
        raise ValueError(f"branch parametrization requires 0 < H < 1, got H={p.H}")
    rad = _branch_radicand(p, y)
    if rad < 0.0:
        if rad < -1e-12:
            raise ValueError(f"y={y!r} is outside the branch domain (radicand {rad!r})")
        rad = 0.0
    C, H, L = p.C, p.H, p.Lambda
    x = (H + 1.0) * y / (2.0 * H) + C * L / (C * C + 1.0) + np.sqrt(rad)
    resid = gamma1_conic(p).evaluate(x, y)
    if abs(resid) > 1e-9 * (1.0 + y * y):
        raise ArithmeticError(f"branch point failed conic residual check: {resid!r}")
    return float(x)


def branch_min_y(p: SystemParams) -> float:
    """Smallest y admissible on the branch (radicand root, clipped positive)."""
    C, H, L = p.C, p.H, p.Lambda
    c2 = C * C + 1.0
    a = gamma1_discriminant(H) / (4.0 * H * H)
    b = L * C * (1.0 - H) / (H * c2)
    c = L * L * (c2 - H) / (H * c2 * c2)
    disc = b * b - 4.0 * a * c
    if disc <= 0.0:
        return 1e-9
    root = (-b + np.sqrt(disc)) / (2.0 * a)
    return float(max(root, 0.0) + 1e-9)
