"""Airy functions Ai, Bi and their derivatives for real argument.

For ``|x| <= SERIES_SWITCH`` the Maclaurin series is summed in MPFR with
enough guard bits to absorb the cancellation between its two halves (the
terms grow like ``exp(2/3 |x|^{3/2})`` while Ai decays). Outside, the
standard asymptotic expansions are used, truncated at the smallest term.
"""

from __future__ import annotations

import math
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr

from ..errors import DomainError

__all__ = ["airy_ai", "airy_bi", "airy_ai_prime", "airy_bi_prime", "airy", "X_MAX", "SERIES_SWITCH"]

X_MAX = 25.0
SERIES_SWITCH = 8.0
SERIES_TERMS = 40
MIN_ASYMPTOTIC_TERMS = 8
_MAX_ASYMPTOTIC_TERMS = 60
_SQRT_PI = math.sqrt(math.pi)


@lru_cache(maxsize=None)
def _constants(prec):
    with gmpy2.context(precision=prec):
        c1 = 1 / (gmpy2.cbrt(mpfr(9)) * gmpy2.gamma(mpfr(2) / 3))   # Ai(0)
        c2 = 1 / (gmpy2.cbrt(mpfr(3)) * gmpy2.gamma(mpfr(1) / 3))   # -Ai'(0)
        sqrt3 = gmpy2.sqrt(mpfr(3))
    return c1, c2, sqrt3


def _series(x: float):
    """(Ai, Ai', Bi, Bi') from the Maclaurin series."""
    zeta = 2.0 / 3.0 * abs(x) ** 1.5
    prec = 64 + 2 * int(zeta * 1.4427) + 16
    c1, c2, sqrt3 = _constants(prec)
    with gmpy2.context(precision=prec):
        xm = mpfr(x)
        x3 = xm * xm * xm
        # f = sum 3^k (1/3)_k x^{3k}/(3k)!, g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
        fk = mpfr(1)
        gk = xm
        f = fk
        g = gk
        fp = mpfr(0)        # f'
        gp = mpfr(1)        # g'
        for k in range(1, SERIES_TERMS + 1):
            fk = fk * x3 / ((3 * k - 1) * (3 * k))
            gk = gk * x3 / ((3 * k) * (3 * k + 1))
            f += fk
            g += gk
            # d/dx x^{3k} = 3k x^{3k-1}; d/dx x^{3k+1} = (3k+1) x^{3k}
            if xm != 0:
                fp += fk * (3 * k) / xm
                gp += gk * (3 * k + 1) / xm
        ai = c1 * f - c2 * g
        aip = c1 * fp - c2 * gp
        bi = sqrt3 * (c1 * f + c2 * g)
        bip = sqrt3 * (c1 * fp + c2 * gp)
    return float(ai), float(aip), float(bi), float(bip)


def _uv_coefficients(n):
    u = [1.0]
    for k in range(1, n + 1):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n + 1)]
    return u, v


_U, _V = _uv_coefficients(_MAX_ASYMPTOTIC_TERMS)


def _n_terms(zeta):
    # optimal truncation sits near k ~ 2 zeta; never fewer than the floor
    return max(MIN_ASYMPTOTIC_TERMS, min(_MAX_ASYMPTOTIC_TERMS, int(2 * zeta)))


def _asym_sum(c, zeta, alternating, n):
    s = 0.0
    zk = 1.0
    last = math.inf
    for k in range(n + 1):
        term = c[k] / zk
        if alternating and k % 2:
            term = -term
        if abs(term) > last and k >= MIN_ASYMPTOTIC_TERMS:
            break
        s += term
        last = abs(term)
        zk *= zeta
    return s


def _asymptotic_positive(x: float):
    zeta = 2.0 / 3.0 * x ** 1.5
    n = _n_terms(zeta)
    x4 = x ** 0.25
    em = math.exp(-zeta)
    ep = math.exp(zeta)
    ai = em / (2.0 * _SQRT_PI * x4) * _asym_sum(_U, zeta, True, n)
    aip = -x4 * em / (2.0 * _SQRT_PI) * _asym_sum(_V, zeta, True, n)
    bi = ep / (_SQRT_PI * x4) * _asym_sum(_U, zeta, False, n)
    bip = x4 * ep / _SQRT_PI * _asym_sum(_V, zeta, False, n)
    return ai, aip, bi, bip


def _split_sums(c, zeta, n):
    # P = sum (-1)^k c_{2k} zeta^{-2k},  Q = sum (-1)^k c_{2k+1} zeta^{-2k-1}
    even = 0.0
    odd = 0.0
    last = math.inf
    for k in range(n + 1):
        term = c[k] / zeta ** k
        if abs(term) > last and k >= MIN_ASYMPTOTIC_TERMS:
            break
        last = abs(term)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            odd += sign * term
        else:
            even += sign * term
    return even, odd


def _asymptotic_negative(x: float):
    y = -x
    zeta = 2.0 / 3.0 * y ** 1.5
    n = _n_terms(zeta)
    y4 = y ** 0.25
    s = math.sin(zeta + math.pi / 4)
    c = math.cos(zeta + math.pi / 4)
    p, q = _split_sums(_U, zeta, n)
    r, t = _split_sums(_V, zeta, n)
    ai = (s * p - c * q) / (_SQRT_PI * y4)
    bi = (c * p + s * q) / (_SQRT_PI * y4)
    aip = -y4 / _SQRT_PI * (c * r + s * t)
    bip = y4 / _SQRT_PI * (s * r - c * t)
    return ai, aip, bi, bip


def airy(x: float):
    """Return ``(Ai(x), Ai'(x), Bi(x), Bi'(x))``.

    ``|x|`` is limited to ``X_MAX``; beyond it Ai underflows doubles on the
    right and the left-hand oscillation loses its phase accuracy.
    """
    x = float(x)
    if not abs(x) <= X_MAX:
        raise DomainError(f"|x| must be <= {X_MAX}, got {x!r}")
    if abs(x) <= SERIES_SWITCH:
        return _series(x)
    if x > 0:
        return _asymptotic_positive(x)
    return _asymptotic_negative(x)


def airy_ai(x: float) -> float:
    return airy(x)[0]


def airy_ai_prime(x: float) -> float:
    return airy(x)[1]


def airy_bi(x: float) -> float:
    return airy(x)[2]


def airy_bi_prime(x: float) -> float:
    return airy(x)[3]
