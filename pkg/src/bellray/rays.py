"""Numerical checks of the ray construction behind the asymptotic formulas.

With ``u = eps x`` and ``v = eps n`` the phase ``psi`` solves the eikonal
equation ``e^q - u (p + 1) = 0`` (``p = psi_u``, ``q = psi_v``) and the
amplitude ``K`` solves

    K_v + psi_vv K / 2 - u exp(-psi_v) K_u = 0,

with ``psi(u, 0) = 0`` and ``K(u, 0) = 1``. The characteristics are

    u = s e^{-t},  v = s t,  p = e^t - 1,  q = ln s,

along which ``psi = s (1 - t - e^{-t}) + s t ln s`` and ``K = 1/sqrt(t + 1)``.
Inverting gives ``t = LW(v/u)`` and ``s = v / LW(v/u)``.

Everything here works in doubles; derivatives of the closed forms are taken
by central differences so the PDE residuals are an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import lambert_w0

__all__ = [
    "RayState",
    "GridSpec",
    "rays_closed_form",
    "psi_uv",
    "amp_uv",
    "ray_coordinates",
    "integrate_characteristics",
    "eikonal_residual",
    "transport_residual",
    "psi_vv_fd",
    "observed_order",
]

DEFAULT_H = 1e-4


@dataclass(frozen=True)
class RayState:
    t: float
    s: float
    u: float
    v: float
    p: float
    q: float
    psi: float
    amp: float


@dataclass(frozen=True)
class GridSpec:
    u_min: float = 0.5
    u_max: float = 2.0
    v_min: float = 0.5
    v_max: float = 2.0
    nu: int = 16
    nv: int = 16
    h: float = DEFAULT_H

    def __post_init__(self):
        if not (self.u_min > 0 and self.v_min > 0):
            raise ValueError("grid must lie strictly inside u, v > 0")
        if not (self.u_max >= self.u_min and self.v_max >= self.v_min):
            raise ValueError("grid bounds are reversed")
        if self.nu < 1 or self.nv < 1:
            raise ValueError("nu and nv must be positive")
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.h >= min(self.u_min, self.v_min):
            raise ValueError("h must be smaller than the distance to the axes")

    def points(self):
        us = np.linspace(self.u_min, self.u_max, self.nu)
        vs = np.linspace(self.v_min, self.v_max, self.nv)
        for u in us:
            for v in vs:
                yield float(u), float(v)

    def with_h(self, h):
        return GridSpec(self.u_min, self.u_max, self.v_min, self.v_max, self.nu, self.nv, h)


def rays_closed_form(t: float, s: float) -> RayState:
    if not s > 0:
        raise ValueError(f"s must be positive, got {s!r}")
    et = math.exp(t)
    return RayState(
        t=t,
        s=s,
        u=s / et,
        v=s * t,
        p=et - 1.0,
        q=math.log(s),
        psi=s * (1.0 - t - 1.0 / et) + math.log(s) * s * t,
        amp=1.0 / math.sqrt(t + 1.0),
    )


def ray_coordinates(u: float, v: float) -> tuple:
    """``(t, s)`` of the ray through ``(u, v)``."""
    t = lambert_w0(v / u)
    return t, (v / t if t else u)


def psi_uv(u: float, v: float) -> float:
    w = lambert_w0(v / u)
    if w == 0:
        return 0.0
    r = v / w
    return r + v * math.log(r) - (u + v)


def amp_uv(u: float, v: float) -> float:
    return 1.0 / math.sqrt(lambert_w0(v / u) + 1.0)


def _rhs(t, y):
    u, v, p, q, psi, k = y
    du = -u
    dv = math.exp(q)
    return np.array([du, dv, p + 1.0, 0.0, p * du + q * dv, -k / (2.0 * (t + 1.0))])


def integrate_characteristics(s: float, t_end: float, dt: float) -> list:
    """Classical RK4 on the characteristic system from ``t = 0`` to ``t_end``.

    The state also carries ``psi`` (``psi' = p u' + q v'``) and the
    amplitude (``K' = -K / (2 (t + 1))``). Initial data: ``u = s``,
    ``v = 0``, ``p = 0``, ``q = ln s``, ``psi = 0``, ``K = 1``.
    """
    if not s > 0:
        raise ValueError(f"s must be positive, got {s!r}")
    if not (t_end > 0 and dt > 0):
        raise ValueError("t_end and dt must be positive")
    if dt > t_end / 10:
        raise ValueError(f"dt={dt} too coarse; need dt <= t_end/10")
    y = np.array([s, 0.0, 0.0, math.log(s), 0.0, 1.0])
    nsteps = int(math.ceil(t_end / dt - 1e-9))
    out = [RayState(0.0, s, *map(float, y))]
    t = 0.0
    for i in range(nsteps):
        h = min(dt, t_end - t) if i == nsteps - 1 else dt
        k1 = _rhs(t, y)
        k2 = _rhs(t + h / 2, y + h / 2 * k1)
        k3 = _rhs(t + h / 2, y + h / 2 * k2)
        k4 = _rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = (i + 1) * dt if i < nsteps - 1 else t_end
        out.append(RayState(t, s, *map(float, y)))
    return out


def _psi_grad(u, v, h):
    p = (psi_uv(u + h, v) - psi_uv(u - h, v)) / (2 * h)
    q = (psi_uv(u, v + h) - psi_uv(u, v - h)) / (2 * h)
    return p, q


def psi_vv_fd(u: float, v: float, h: float = DEFAULT_H) -> float:
    return (psi_uv(u, v + h) - 2 * psi_uv(u, v) + psi_uv(u, v - h)) / (h * h)


def eikonal_residual(grid: GridSpec) -> float:
    """``max |e^q - u (p + 1)|`` over the grid, derivatives by central differences."""
    worst = 0.0
    for u, v in grid.points():
        p, q = _psi_grad(u, v, grid.h)
        worst = max(worst, abs(math.exp(q) - u * (p + 1.0)))
    return worst


def transport_residual(grid: GridSpec) -> float:
    """Max of ``|K_v + psi_vv K/2 - u exp(-psi_v) K_u| / |K|`` over the grid."""
    h = grid.h
    worst = 0.0
    for u, v in grid.points():
        k = amp_uv(u, v)
        ku = (amp_uv(u + h, v) - amp_uv(u - h, v)) / (2 * h)
        kv = (amp_uv(u, v + h) - amp_uv(u, v - h)) / (2 * h)
        _, q = _psi_grad(u, v, h)
        res = kv + 0.5 * psi_vv_fd(u, v, h) * k - u * math.exp(-q) * ku
        worst = max(worst, abs(res) / abs(k))
    return worst


def observed_order(residual, grid: GridSpec, h: float | None = None) -> float:
    """``log2(r(h) / r(h/2))`` for a residual function of a grid."""
    h = grid.h if h is None else h
    r1 = residual(grid.with_h(h))
    r2 = residual(grid.with_h(h / 2))
    return math.log2(r1 / r2)
