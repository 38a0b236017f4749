"""Lambert W on the real line: branches 0 and -1, and the complex-conjugate
pair that the two branches become below the branch point ``-1/e``.

All branches are refined with Halley's iteration on ``w e^w - z``.
"""

from __future__ import annotations

import cmath
import math

from ..errors import DomainError

__all__ = [
    "BRANCH_POINT",
    "lambert_w0",
    "lambert_wm1",
    "lambert_w_complex",
    "lambert_w",
    "lw_branch_series",
]

BRANCH_POINT = -math.exp(-1.0)  # z0 = -1/e
_E = math.e

MAX_ITER = 40
# |z - z0| below which the real branches return the branch-point series
SERIES_HANDOFF = 1e-6
_SERIES_MAX_DELTA = 0.05


def _series_in_p(p):
    # W = -1 + p - p^2/3 + 11/72 p^3, p = +-sqrt(2 (e z + 1))
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p


def _delta(z):
    # z - z0 with z0 split into head and tail for a little extra accuracy
    return (z - BRANCH_POINT) - _Z0_TAIL


# -1/e = BRANCH_POINT + _Z0_TAIL to ~32 digits
_Z0_TAIL = 1.2428753672788363e-17


def _halley(w, z):
    for _ in range(MAX_ITER):
        ew = cmath.exp(w) if isinstance(w, complex) else math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0:  # e^w underflowed
            break
        dw = f / denom
        w -= dw
        if abs(dw) <= 1e-16 * (1.0 + abs(w)):
            break
    return w


def lambert_w0(z: float) -> float:
    """Principal branch, ``W0 : [-1/e, inf) -> [-1, inf)``."""
    z = float(z)
    if math.isnan(z):
        raise DomainError("z is NaN")
    d = _delta(z)
    if d < 0:
        if d > -4e-17:  # z0 itself, after rounding
            return -1.0
        raise DomainError(f"lambert_w0 needs z >= -1/e, got {z!r}; use lambert_w_complex")
    if z == 0.0:
        return 0.0
    if math.isinf(z):
        return math.inf
    if d < SERIES_HANDOFF:
        return _series_in_p(math.sqrt(2.0 * _E * d))
    if d < 0.25:
        w = _series_in_p(math.sqrt(2.0 * _E * d))
    elif z < 3.0:
        w = math.log1p(z)
    else:
        lz = math.log(z)
        w = lz - math.log(lz)
    return max(_halley(w, z), -1.0)


def lambert_wm1(z: float) -> float:
    """Lower real branch, ``W_{-1} : [-1/e, 0) -> (-inf, -1]``."""
    z = float(z)
    if not (z < 0.0):
        raise DomainError(f"lambert_wm1 needs -1/e <= z < 0, got {z!r}")
    d = _delta(z)
    if d < 0:
        if d > -4e-17:
            return -1.0
        raise DomainError(f"lambert_wm1 needs z >= -1/e, got {z!r}; use lambert_w_complex")
    if d < SERIES_HANDOFF:
        return _series_in_p(-math.sqrt(2.0 * _E * d))
    if d < 0.25:
        w = _series_in_p(-math.sqrt(2.0 * _E * d))
    else:
        l1 = math.log(-z)
        w = l1 - math.log(-l1)
    return min(_halley(w, z), -1.0)


def lambert_w_complex(k: int, z: float) -> complex:
    """Branch ``k`` in {0, -1} for real ``z < -1/e``.

    The two values are complex conjugates; branch 0 has positive imaginary
    part and branch -1 is returned as its exact conjugate.
    """
    if k not in (0, -1):
        raise DomainError(f"branch must be 0 or -1, got {k!r}")
    z = float(z)
    d = _delta(z)
    if not d < 0:
        raise DomainError(f"lambert_w_complex needs z < -1/e, got {z!r}; use the real branches")
    if math.isinf(z):
        raise DomainError("z must be finite")
    p = 1j * math.sqrt(-2.0 * _E * d)
    # below 1e-8 the four-term series is already exact to rounding; up to the
    # real-branch handoff it is not, and Halley still converges there
    if -d < 1e-8:
        w = _series_in_p(p)
    else:
        # the series seed drifts to branch 1 beyond -d ~ 1.2
        if -d < 0.5:
            w = _series_in_p(p)
        else:
            l1 = cmath.log(z)  # principal: imaginary part pi
            w = l1 - cmath.log(l1)
        w = _halley(w, z)
    w = complex(w.real, abs(w.imag))
    return w if k == 0 else w.conjugate()


def lambert_w(z: float, k: int = 0) -> complex:
    """Branch ``k`` of W at real ``z``, returned as complex.

    Real branches are used where they exist; below ``-1/e`` the conjugate
    pair is returned.
    """
    if k not in (0, -1):
        raise DomainError(f"branch must be 0 or -1, got {k!r}")
    if _delta(float(z)) <= -4e-17:
        return lambert_w_complex(k, z)
    if k == 0:
        return complex(lambert_w0(z))
    return complex(lambert_wm1(z))


def lw_branch_series(z: float) -> float:
    """Four-term expansion of W0 about the branch point ``z0 = -1/e``.

    ``-1 + sqrt(2e(z-z0)) - (2/3) e (z-z0) + (11/36) sqrt(2 e^3 (z-z0)^3)``,
    valid for ``0 <= z - z0 <= 0.05``.
    """
    d = _delta(float(z))
    if d < 0:
        if d > -4e-17:
            d = 0.0
        else:
            raise DomainError(f"series is implemented only above the branch point, z - z0 = {d!r}")
    if d > _SERIES_MAX_DELTA:
        raise DomainError(f"z - z0 = {d!r} is outside the series range [0, {_SERIES_MAX_DELTA}]")
    return (-1.0 + math.sqrt(2.0 * _E * d) - 2.0 / 3.0 * _E * d
            + 11.0 / 36.0 * math.sqrt(2.0 * _E**3 * d**3))
