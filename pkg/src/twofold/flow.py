"""Closed-form flows and fundamental matrices of the two linear pieces.

Both linear parts have spectrum {A, C + i, C - i}, so their exponentials are
assembled from that eigenstructure rather than a generic matrix exponential:
the (y, z) block of the upper field is a frequency-1 rotation scaled by
exp(Ct), and the x row is a rate-A filter driven by z.  The lower field has
the same structure with the roles of x and y swapped, so its matrices are the
swap-conjugates of the upper ones.

Each affine piece is integrated as phi(t, s) = s* + exp(Dt)(s - s*) around
its stationary point s*, which exists whenever A(C^2 + 1) != 0; in the
resonant family A = -2C != 0 this always holds.
"""
from __future__ import annotations

import numpy as np

from .system import SystemParams

__all__ = [
    "flow_X",
    "flow_Y",
    "fundamental_X",
    "fundamental_Y",
    "stationary_X",
    "stationary_Y",
    "FundamentalMatrix",
    "z_closed_form",
]

_SWAP = np.array([
    [0.0, 1.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0],
])


def _phi_canonical(A: float, C: float, H: float, t: float) -> np.ndarray:
    """exp(D t) for the canonical arrangement (x driven by z, (y,z) rotation)."""
    b = -H * ((A - C) ** 2 + 1.0)
    beta = C - A
    e_at = np.exp(A * t)
    e_ct = np.exp(C * t)
    st, ct = np.sin(t), np.cos(t)
    den = beta * beta + 1.0
    # int_0^t e^{A(t-s)} e^{Cs} sin s ds and the cosine analogue
    int_sin = (e_ct * (beta * st - ct) + e_at) / den
    int_cos = (e_ct * (beta * ct + st) - beta * e_at) / den
    out = np.zeros((3, 3))
    out[0, 0] = e_at
    out[0, 1] = b * int_sin
    out[0, 2] = b * (int_cos + C * int_sin)
    out[1, 1] = e_ct * (ct - C * st)
    out[1, 2] = -(1.0 + C * C) * e_ct * st
    out[2, 1] = e_ct * st
    out[2, 2] = e_ct * (ct + C * st)
    return out


def _stationary_canonical(A: float, C: float, H: float, L: float) -> np.ndarray:
    zs = L / (1.0 + C * C)
    return np.array([H * L * (A - 2.0 * C) / (1.0 + C * C), -2.0 * C * zs, zs])


class FundamentalMatrix:
    """A fundamental matrix value Phi(t) tagged with its time."""

    __slots__ = ("t", "matrix")

    def __init__(self, t: float, matrix: np.ndarray):
        self.t = float(t)
        self.matrix = matrix

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.matrix
        return self.matrix.astype(dtype)

    def __matmul__(self, other):
        return self.matrix @ np.asarray(other)

    def __rmatmul__(self, other):
        return np.asarray(other) @ self.matrix

    def __repr__(self):  # pragma: no cover
        return f"FundamentalMatrix(t={self.t!r},\n{self.matrix!r})"


def fundamental_X(p: SystemParams, t: float) -> FundamentalMatrix:
    """exp(DX t) in closed form."""
    return FundamentalMatrix(t, _phi_canonical(p.A, p.C, p.H, t))


def fundamental_Y(p: SystemParams, t: float) -> FundamentalMatrix:
    """exp(DY t); DY is the swap-conjugate of DX, so Phi_Y = P Phi_X P."""
    return FundamentalMatrix(t, _SWAP @ _phi_canonical(p.a, p.c, p.h, t) @ _SWAP)


def stationary_X(p: SystemParams) -> np.ndarray:
    """Stationary point of the upper affine field."""
    return _stationary_canonical(p.A, p.C, p.H, p.Lambda)


def stationary_Y(p: SystemParams) -> np.ndarray:
    """Stationary point of the lower affine field."""
    return _SWAP @ _stationary_canonical(p.a, p.c, p.h, p.lam)


def flow_X(p: SystemParams, s0, t: float) -> np.ndarray:
    """Exact solution of sdot = X(s) at time t from s0."""
    ss = stationary_X(p)
    return ss + _phi_canonical(p.A, p.C, p.H, t) @ (np.asarray(s0, dtype=float) - ss)


def flow_Y(p: SystemParams, s0, t: float) -> np.ndarray:
    """Exact solution of sdot = Y(s) at time t from s0."""
    s0 = np.asarray(s0, dtype=float)
    ss = _stationary_canonical(p.a, p.c, p.h, p.lam)
    inner = ss + _phi_canonical(p.a, p.c, p.h, t) @ (_SWAP @ s0 - ss)
    return _SWAP @ inner


def z_closed_form(p: SystemParams, s0, field: str = "X"):
    """Closed-form z(t) and dz/dt(t) along one field's orbit from s0.

    The z component of either piece decouples into a driven 2D rotation, so
    it admits the scalar closed form
    z(t) = zs + e^{Ct} (wy sin t + (cos t + C sin t) wz).
    Both returned callables accept scalar or array t.
    """
    s0 = np.asarray(s0, dtype=float)
    C = p.C
    if field == "X":
        L_eff, ylike = p.Lambda, s0[1]
    elif field == "Y":
        L_eff, ylike = p.lam, s0[0]
    else:
        raise ValueError(f"field must be 'X' or 'Y', got {field!r}")
    zs = L_eff / (1.0 + C * C)
    wy = ylike + 2.0 * C * zs
    wz = s0[2] - zs

    def z(t):
        e = np.exp(C * t)
        return zs + e * (wy * np.sin(t) + (np.cos(t) + C * np.sin(t)) * wz)

    def dz(t):
        e = np.exp(C * t)
        st, ct = np.sin(t), np.cos(t)
        return e * (wy * (C * st + ct) + wz * ((C * C - 1.0) * st + 2.0 * C * ct))

    return z, dz
