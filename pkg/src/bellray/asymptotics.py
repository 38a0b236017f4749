"""Large-n approximations to the Bell polynomials.

Three regions, split by the sign structure of ``LW(n/x)``:

* exponential (``x > 0`` or ``x < -e n``): ``B_n(x) ~ Phi_n(x; 0)``
* oscillatory (``-e n < x < 0``): ``B_n(x) ~ Phi_n(x; 0) + Phi_n(x; -1)``,
  the two terms being complex conjugates
* transition (``x`` near ``-e n``): an Airy function in the stretched
  variable ``beta = -(x + e n) / n^{1/3}``

with ``Phi_n(x; k) = exp{n/W + n ln(n/W) - (x + n)} / sqrt(W + 1)`` and
``W = LW_k(n/x)``.

Values overflow doubles quickly, so every formula is evaluated as a
logarithm first. :class:`ApproxResult` carries ``log_abs`` and ``sign``
alongside ``value``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DomainError, PhiOverflowError, RegionError, TransitionSingularityError
from .specfun import airy_ai, lambert_w

__all__ = [
    "BETA_CUT",
    "LOG_OVERFLOW",
    "Region",
    "ApproxResult",
    "log_phi_nk",
    "phi_nk",
    "approx_exponential",
    "approx_oscillatory",
    "beta_of",
    "x_of",
    "log_varphi",
    "varphi",
    "lw_beta_series",
    "approx_transition",
    "classify_region",
    "evaluate",
]

BETA_CUT = 3.0
LOG_OVERFLOW = 700.0
SINGULARITY_TOL = 1e-8

_E = math.e
_AIRY_SCALE = 2.0 ** (1.0 / 3.0) / _E                       # Ai(2^{1/3} e^{-1} beta)
_LOG_C1_CONST = 0.5 * math.log(math.pi) + 5.0 / 6.0 * math.log(2.0)   # sqrt(pi) 2^{5/6}


class Region(enum.Enum):
    EXPONENTIAL = "exponential"
    OSCILLATORY = "oscillatory"
    TRANSITION = "transition"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ApproxResult:
    """One asymptotic evaluation.

    ``value`` is ``sign * exp(log_abs)``; when that overflows a double,
    ``log_domain`` is set and ``value`` is ``+-inf``. ``branch_residual``
    is the imaginary part left over after taking the real value, relative
    to the magnitude (0 for the Airy formula).
    """

    value: float
    region: Region
    log_abs: float
    sign: int
    beta: float | None = None
    branch_residual: float = 0.0
    log_domain: bool = False

    @classmethod
    def from_log(cls, log_abs, sign, region, **kw):
        if sign == 0 or log_abs == -math.inf:
            return cls(0.0, region, -math.inf, 0, **kw)
        if log_abs > LOG_OVERFLOW:
            return cls(math.copysign(math.inf, sign), region, log_abs, sign, log_domain=True, **kw)
        return cls(sign * math.exp(log_abs), region, log_abs, sign, **kw)


def _check_nx(n, x):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    return x


def log_phi_nk(n: int, x: float, k: int) -> complex:
    """Complex logarithm of ``Phi_n(x; k)``, principal branches throughout."""
    x = _check_nx(n, x)
    if x == 0:
        raise DomainError("x must be nonzero")
    w = lambert_w(n / x, k)
    wp1 = w + 1.0
    if abs(wp1) < SINGULARITY_TOL:
        raise TransitionSingularityError(
            f"|LW_{k}(n/x) + 1| = {abs(wp1):.3g} < {SINGULARITY_TOL}: use the transition formula")
    # log(n/W) with a negative real W: cmath gives imaginary part +pi
    ratio = n / w
    return ratio + n * cmath.log(ratio) - (x + n) - 0.5 * cmath.log(wp1)


def phi_nk(n: int, x: float, k: int) -> complex:
    """``Phi_n(x; k)``; raises :class:`PhiOverflowError` past ``exp(700)``."""
    lg = log_phi_nk(n, x, k)
    if lg.real > LOG_OVERFLOW:
        raise PhiOverflowError(lg.real)
    if x > 0:
        return complex(math.exp(lg.real), 0.0)
    return cmath.exp(lg)


def _in_window(n, x, beta_cut):
    return beta_cut is not None and abs(beta_of(n, x)) <= beta_cut


def _reduce_phase(theta):
    return math.remainder(theta, 2.0 * math.pi)


def approx_exponential(n: int, x: float, beta_cut: float | None = BETA_CUT) -> ApproxResult:
    """Real part of ``Phi_n(x; 0)`` for ``x > 0`` or ``x < -e n``.

    ``beta_cut=None`` drops the transition-window check and admits every
    point where the formula is defined.
    """
    x = _check_nx(n, x)
    if not (x > 0 or x < -_E * n):
        raise RegionError(f"x={x} is not in the exponential region (x > 0 or x < -e n)")
    if _in_window(n, x, beta_cut):
        raise RegionError(f"x={x} lies inside the transition window |beta| <= {beta_cut}")
    lg = log_phi_nk(n, x, 0)
    theta = _reduce_phase(lg.imag)
    c = math.cos(theta)
    sign = (c > 0) - (c < 0)
    log_abs = lg.real + math.log(abs(c)) if c else -math.inf
    return ApproxResult.from_log(log_abs, sign, Region.EXPONENTIAL,
                                 branch_residual=abs(math.sin(theta)))


def approx_oscillatory(n: int, x: float, beta_cut: float | None = BETA_CUT) -> ApproxResult:
    """``Phi_n(x; 0) + Phi_n(x; -1)`` for ``-e n < x < 0``."""
    x = _check_nx(n, x)
    if not (-_E * n < x < 0):
        raise RegionError(f"x={x} is not in the oscillatory region (-e n < x < 0)")
    if _in_window(n, x, beta_cut):
        raise RegionError(f"x={x} lies inside the transition window |beta| <= {beta_cut}")
    l0 = log_phi_nk(n, x, 0)
    l1 = log_phi_nk(n, x, -1)
    # scale both terms by exp(-Re l0) so the sum cannot overflow
    m = l0.real
    s = cmath.exp(complex(l0.real - m, _reduce_phase(l0.imag))) + \
        cmath.exp(complex(l1.real - m, _reduce_phase(l1.imag)))
    if s.real == 0:
        return ApproxResult(0.0, Region.OSCILLATORY, -math.inf, 0, branch_residual=abs(s.imag))
    sign = 1 if s.real > 0 else -1
    return ApproxResult.from_log(m + math.log(abs(s.real)), sign, Region.OSCILLATORY,
                                 branch_residual=abs(s.imag) / abs(s.real))


def beta_of(n: int, x: float) -> float:
    """Stretched variable, ``x = -e n - beta n^{1/3}``."""
    return -(x + _E * n) / n ** (1.0 / 3.0)


def x_of(n: int, beta: float) -> float:
    return -_E * n - beta * n ** (1.0 / 3.0)


def log_varphi(beta: float, n: int) -> tuple:
    """``(log|varphi|, sign)`` of the transition-layer prefactor."""
    log_abs = (math.log(n) + _E - 2.0) * n - (1.0 / _E - 1.0) * beta * n ** (1.0 / 3.0)
    return log_abs, (-1 if n % 2 else 1)


def varphi(beta: float, n: int) -> float:
    """``(-1)^n exp{[ln n + e - 2] n - (1/e - 1) beta n^{1/3}}``.

    Raises :class:`PhiOverflowError` when the exponent passes 700; use
    :func:`log_varphi` there.
    """
    log_abs, sign = log_varphi(beta, n)
    if log_abs > LOG_OVERFLOW:
        raise PhiOverflowError(log_abs)
    return sign * math.exp(log_abs)


def lw_beta_series(beta: float, n: int) -> float:
    """``LW(n / (-e n - beta n^{1/3}))`` expanded in powers of ``n^{-1/3}``."""
    if beta < 0:
        raise DomainError(f"beta must be >= 0 for the real expansion, got {beta!r}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    m = n ** (-1.0 / 3.0)
    return (-1.0 + math.sqrt(2.0 * beta / _E) * m - 2.0 / 3.0 * beta / _E * m * m
            - 7.0 / 36.0 * math.sqrt(2.0 * beta**3 / _E**3) * m**3)


def approx_transition(n: int, x: float, beta_cut: float | None = BETA_CUT) -> ApproxResult:
    """``sqrt(pi) 2^{5/6} n^{1/6} varphi(beta, n) Ai(2^{1/3} beta / e)``."""
    x = _check_nx(n, x)
    beta = beta_of(n, x)
    if beta_cut is not None and abs(beta) > beta_cut:
        raise RegionError(f"|beta|={abs(beta):.4g} exceeds the transition window {beta_cut}")
    ai = airy_ai(_AIRY_SCALE * beta)
    lv, sv = log_varphi(beta, n)
    if ai == 0:
        return ApproxResult(0.0, Region.TRANSITION, -math.inf, 0, beta=beta)
    log_abs = _LOG_C1_CONST + math.log(n) / 6.0 + lv + math.log(abs(ai))
    sign = sv * (1 if ai > 0 else -1)
    return ApproxResult.from_log(log_abs, sign, Region.TRANSITION, beta=beta)


def classify_region(n: int, x: float, beta_cut: float = BETA_CUT) -> Region:
    x = _check_nx(n, x)
    if abs(beta_of(n, x)) <= beta_cut:
        return Region.TRANSITION
    if x > 0 or x < -_E * n:
        return Region.EXPONENTIAL
    return Region.OSCILLATORY


def evaluate(n: int, x: float, beta_cut: float = BETA_CUT) -> ApproxResult:
    """Dispatch to the approximation for the region containing ``(n, x)``."""
    region = classify_region(n, x, beta_cut)
    if region is Region.TRANSITION:
        return approx_transition(n, x, beta_cut)
    if region is Region.EXPONENTIAL:
        return approx_exponential(n, x, beta_cut)
    return approx_oscillatory(n, x, beta_cut)
