"""Exact Bell polynomials and Stirling numbers of the second kind.

Coefficients are held as Python integers; evaluation runs Horner's scheme
in MPFR (through gmpy2) with a running error bound, so every value handed
back carries an upper bound on its rounding error.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpq

from .errors import DomainError, PrecisionError, ResourceLimitError

__all__ = [
    "DEFAULT_PRECISION",
    "MAX_PRECISION",
    "N_MAX_CEILING",
    "BellPolynomial",
    "PrecisionFloat",
    "stirling_table",
    "bell_poly",
    "working_precision",
    "eval_exact",
    "eval_derivative",
    "genfun_partial_sum",
    "genfun_first_omitted",
    "set_partition_codes",
    "bell_number_oracle",
    "enumerate_set_partitions",
]

DEFAULT_PRECISION = 128
MAX_PRECISION = 1 << 20
N_MAX_CEILING = 10_000
ORACLE_MAX_N = 12

_LOG2E = 1.0 / math.log(2.0)
# Rounded-up context for error-bound bookkeeping.
_BOUND_CTX = gmpy2.context(precision=64, round=gmpy2.RoundUp)


@dataclass(frozen=True)
class PrecisionFloat:
    """An MPFR value together with its working precision and error bound.

    ``err_bound`` is expressed in ulps of ``value`` at ``precision_bits``.
    """

    value: mpfr
    precision_bits: int
    err_bound: float = 0.0

    def __post_init__(self):
        if self.precision_bits < 53:
            raise ValueError(f"precision_bits must be >= 53, got {self.precision_bits}")
        if not (self.err_bound >= 0 and math.isfinite(self.err_bound)):
            raise ValueError(f"err_bound must be finite and >= 0, got {self.err_bound}")
        if not gmpy2.is_finite(self.value):
            raise DomainError(f"value must be finite, got {self.value}")

    @classmethod
    def from_value(cls, x, precision_bits: int = DEFAULT_PRECISION) -> "PrecisionFloat":
        """Round ``x`` to ``precision_bits``.

        Accepts ints, floats, Fractions, decimal or ``p/q`` strings, gmpy2
        numbers and other PrecisionFloats. ``err_bound`` is 0 when the
        conversion is exact and 0.5 ulp otherwise.
        """
        if isinstance(x, PrecisionFloat):
            if x.precision_bits >= precision_bits:
                return x
            return cls(mpfr(x.value, precision_bits), precision_bits,
                       x.err_bound + 0.5 if _inexact(x.value, precision_bits) else x.err_bound)
        if isinstance(x, float):
            if not math.isfinite(x):
                raise DomainError(f"x must be finite, got {x}")
            return cls(mpfr(x, max(precision_bits, 53)), precision_bits)
        if isinstance(x, str):
            x = x.strip()
            try:
                q = mpq(x)
            except ValueError:
                # things like 'inf', 'nan', '1e999999'
                raise DomainError(f"cannot parse a finite real from {x!r}") from None
        elif isinstance(x, Fraction):
            q = mpq(x.numerator, x.denominator)
        elif isinstance(x, (int, type(mpq(0)), type(gmpy2.mpz(0)))):
            q = mpq(x)
        elif isinstance(x, type(mpfr(0))):
            if not gmpy2.is_finite(x):
                raise DomainError(f"x must be finite, got {x}")
            return cls(mpfr(x, precision_bits), precision_bits,
                       0.5 if _inexact(x, precision_bits) else 0.0)
        else:
            return cls.from_value(float(x), precision_bits)
        v = mpfr(q, precision_bits)
        return cls(v, precision_bits, 0.0 if mpq(v) == q else 0.5)

    @property
    def ulp(self) -> mpfr:
        return _ulp(self.value, self.precision_bits)

    @property
    def abs_error(self) -> mpfr:
        """Absolute error bound, ``err_bound * ulp``."""
        return _BOUND_CTX.mul(mpfr(self.err_bound), self.ulp)

    def is_integer(self) -> bool:
        return self.err_bound == 0 and gmpy2.is_integer(self.value)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        if gmpy2.is_integer(self.value) and self.err_bound == 0:
            return str(int(self.value))
        digits = max(1, int(self.precision_bits / _LOG2E / math.log(10)))
        return format(self.value, f".{digits}g")


@dataclass(frozen=True)
class BellPolynomial:
    """``B_n(x) = sum_k coeffs[k] x^k`` with ``coeffs[k] = S(n, k)``."""

    n: int
    coeffs: tuple

    @property
    def degree(self) -> int:
        return self.n

    def derivative_coeffs(self) -> tuple:
        return tuple(k * c for k, c in enumerate(self.coeffs))[1:] or (0,)

    def __call__(self, x: int) -> int:
        """Exact value at an integer (or Fraction) argument."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


class _StirlingTriangle:
    # Grow-only cache. Rows are immutable tuples appended under a lock, so
    # readers see either a complete row or none.
    def __init__(self):
        self._rows = [(1,)]
        self._lock = threading.Lock()

    def rows(self, n_max: int) -> list:
        if n_max >= len(self._rows):
            with self._lock:
                rows = self._rows
                while len(rows) <= n_max:
                    prev = rows[-1]
                    m = len(prev)  # new row index
                    row = [0] * (m + 1)
                    for k in range(1, m + 1):
                        row[k] = (k * prev[k] if k < m else 0) + prev[k - 1]
                    rows.append(tuple(row))
        return self._rows[: n_max + 1]


_TRIANGLE = _StirlingTriangle()


def _check_n(n: int, ceiling: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if n > ceiling:
        raise ResourceLimitError(f"n={n} exceeds the table ceiling {ceiling}")


def stirling_table(n_max: int, ceiling: int = N_MAX_CEILING) -> list:
    """Rows ``0..n_max`` of the Stirling triangle; row ``n`` holds ``S(n, 0..n)``."""
    _check_n(n_max, ceiling)
    return list(_TRIANGLE.rows(n_max))


def bell_poly(n: int, ceiling: int = N_MAX_CEILING) -> BellPolynomial:
    _check_n(n, ceiling)
    return BellPolynomial(n, _TRIANGLE.rows(n)[n])


# -- evaluation ----------------------------------------------------------------

def _ulp(v: mpfr, prec: int) -> mpfr:
    if v == 0:
        return mpfr(0)
    return gmpy2.mul_2exp(mpfr(1), gmpy2.get_exp(v) - prec)


def _inexact(v, prec: int) -> bool:
    return mpq(mpfr(v, prec)) != mpq(v)


def working_precision(n: int, x, precision_bits: int | None = None,
                      max_bits: int = MAX_PRECISION) -> int:
    """Bits used to evaluate ``B_n(x)``.

    For negative ``x`` the alternating terms cancel; the largest one is
    about ``|x|^n`` near ``x = -e n``, so ``n (1 + ln n) log2(e) + 64`` bits
    are added on top of the default.
    """
    bits = DEFAULT_PRECISION if precision_bits is None else int(precision_bits)
    if bits < 53:
        raise PrecisionError(f"precision_bits must be >= 53, got {bits}")
    if x < 0 and n >= 1:
        bits = max(bits, math.ceil(n * (1.0 + math.log(n)) * _LOG2E) + 64)
    if bits > max_bits:
        raise PrecisionError(f"{bits} bits needed, maximum is {max_bits}")
    return bits


def _resolve(n, x, precision_bits, max_bits):
    floor_bits = x.precision_bits if isinstance(x, PrecisionFloat) else 53
    sign_probe = PrecisionFloat.from_value(x, 53).value
    prec = max(working_precision(n, sign_probe, precision_bits, max_bits), floor_bits)
    if prec > max_bits:
        raise PrecisionError(f"{prec} bits needed, maximum is {max_bits}")
    return PrecisionFloat.from_value(x, prec), prec


def _horner(coeffs: Sequence[int], x: PrecisionFloat, prec: int) -> PrecisionFloat:
    if x.err_bound == 0 and gmpy2.is_integer(x.value):
        xi = int(x.value)
        acc = 0
        for c in reversed(coeffs):
            acc = acc * xi + c
        return PrecisionFloat(mpfr(acc, max(prec, acc.bit_length(), 53)), prec)

    ctx = gmpy2.context(precision=prec)
    bnd = _BOUND_CTX
    xv = x.value
    ax = abs(xv)
    y = mpfr(0)
    mu = mpfr(0)
    first = True
    for c in reversed(coeffs):
        cv = mpfr(c, prec)
        coeff_rounded = c.bit_length() > prec
        if first:
            y = cv
            mu = bnd.div(abs(y), 2)
            first = False
        else:
            y = ctx.add(ctx.mul(y, xv), cv)
            mu = bnd.add(bnd.mul(ax, mu), abs(y))
        if coeff_rounded:
            mu = bnd.add(mu, abs(cv))
    # running error bound: u * (2 mu - |y|), u = 2^-prec
    abs_bound = bnd.mul(bnd.sub(bnd.mul(mu, 2), abs(y)), gmpy2.mul_2exp(mpfr(1), -prec))
    if x.err_bound:
        # first-order propagation of the input error through sum |c_k| k |x|^(k-1)
        dabs = mpfr(0)
        for k in range(len(coeffs) - 1, 0, -1):
            dabs = bnd.add(bnd.mul(dabs, ax), k * coeffs[k])
        abs_bound = bnd.add(abs_bound, bnd.mul(bnd.mul(dabs, x.abs_error), 1 + 2.0 ** -20))
    if not ctx.inexact and not any(c.bit_length() > prec for c in coeffs) and not x.err_bound:
        return PrecisionFloat(y, prec)
    scale = y if y != 0 else mu
    u = _ulp(scale, prec)
    ulps = float(bnd.div(abs_bound, u)) if u != 0 else 0.0
    return PrecisionFloat(y, prec, ulps)


def eval_exact(n: int, x, precision_bits: int | None = None,
               max_bits: int = MAX_PRECISION) -> PrecisionFloat:
    """``B_n(x)`` by Horner's scheme at the resolved working precision.

    Integer ``x`` takes an all-integer path and returns ``err_bound == 0``.

    >>> int(eval_exact(5, 10).value)
    226510
    """
    poly = bell_poly(n)
    xp, prec = _resolve(n, x, precision_bits, max_bits)
    return _horner(poly.coeffs, xp, prec)


def eval_derivative(n: int, x, precision_bits: int | None = None,
                    max_bits: int = MAX_PRECISION) -> PrecisionFloat:
    """``B_n'(x)``, same precision policy as :func:`eval_exact`."""
    poly = bell_poly(n)
    xp, prec = _resolve(n, x, precision_bits, max_bits)
    return _horner(poly.derivative_coeffs(), xp, prec)


# -- generating function -------------------------------------------------------

def _log_abs_bn(n, x):
    # cheap magnitude estimate used only for choosing precision
    if x == 0:
        return 0.0 if n == 0 else -math.inf
    v = eval_exact(n, x).value
    return float(gmpy2.log(abs(v))) if v != 0 else -math.inf


def genfun_first_omitted(x, t, N: int) -> float:
    """Magnitude of the first omitted term ``|B_{N+1}(x)| |t|^{N+1} / (N+1)!``."""
    b = eval_exact(N + 1, x)
    ctx = gmpy2.context(precision=b.precision_bits)
    tv = PrecisionFloat.from_value(t, b.precision_bits).value
    term = ctx.div(ctx.mul(abs(b.value), ctx.pow(abs(tv), N + 1)), gmpy2.fac(N + 1))
    return float(term)


def genfun_partial_sum(x, t, N: int, precision_bits: int | None = None,
                       t_max: float = 2.0) -> PrecisionFloat:
    """``sum_{n=0}^{N} B_n(x) t^n / n!``.

    The working precision is raised until the rounding error sits well
    below the first omitted term, so the difference from ``exp(x(e^t - 1))``
    is dominated by truncation; :func:`genfun_first_omitted` estimates it.
    """
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    xp = PrecisionFloat.from_value(x, DEFAULT_PRECISION)
    tp = PrecisionFloat.from_value(t, DEFAULT_PRECISION)
    if abs(tp.value) > t_max:
        raise DomainError(f"|t| must be <= {t_max}, got {t}")
    prec = working_precision(N, xp.value, precision_bits)
    if tp.value != 0 and xp.value != 0:
        # bits needed to resolve the omitted term against the partial sum
        lt = float(gmpy2.log(abs(tp.value)))
        log_om = _log_abs_bn(N + 1, xp.value) + (N + 1) * lt - math.lgamma(N + 2)
        log_sum = max(_log_abs_bn(k, xp.value) + k * lt - math.lgamma(k + 1)
                      for k in range(N + 1))
        gap = (log_sum - log_om) * _LOG2E
        if math.isfinite(gap):
            prec = max(prec, int(gap) + 64 + prec // 2)
    if prec > MAX_PRECISION:
        raise PrecisionError(f"{prec} bits needed, maximum is {MAX_PRECISION}")
    xp = PrecisionFloat.from_value(x, prec)
    tv = PrecisionFloat.from_value(t, prec).value
    ctx = gmpy2.context(precision=prec)
    bnd = _BOUND_CTX
    u = gmpy2.mul_2exp(mpfr(1), -prec)
    total = mpfr(0)
    err = mpfr(0)
    tn_over_fact = mpfr(1, prec)
    for n in range(N + 1):
        if n:
            tn_over_fact = ctx.div(ctx.mul(tn_over_fact, tv), n)
        b = eval_exact(n, xp, prec)
        term = ctx.mul(b.value, tn_over_fact)
        total = ctx.add(total, term)
        # error of B_n, of t^n/n! (2n roundings), of the product and the sum
        err = bnd.add(err, bnd.mul(b.abs_error, abs(tn_over_fact)))
        err = bnd.add(err, bnd.mul(bnd.mul(abs(term), 2 * n + 2), u))
        err = bnd.add(err, bnd.mul(abs(total), u))
    ul = _ulp(total, prec)
    return PrecisionFloat(total, prec, float(bnd.div(err, ul)) if ul != 0 else 0.0)


# -- brute-force oracle ----------------------------------------------------------

def enumerate_set_partitions(n: int):
    """Yield every partition of ``{0, .., n-1}`` as a list of blocks.

    Restricted growth strings: element ``i`` joins a block numbered at most
    one more than the largest block used so far.
    """
    if n == 0:
        yield []
        return

    def rgs(prefix, top):
        if len(prefix) == n:
            yield prefix
            return
        for b in range(top + 2):
            yield from rgs(prefix + [b], max(top, b))

    for labels in rgs([0], 0):
        blocks = [[] for _ in range(max(labels) + 1)]
        for i, b in enumerate(labels):
            blocks[b].append(i)
        yield blocks


def set_partition_codes(n: int) -> np.ndarray:
    """Every restricted growth string of length ``n`` as rows of an array.

    Row ``r`` assigns element ``i`` to block ``codes[r, i]``; there is one
    row per set partition.
    """
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if n > ORACLE_MAX_N:
        raise DomainError(f"n={n} > {ORACLE_MAX_N}: enumeration would blow up")
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    codes = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)
    for _ in range(1, n):
        fan = top.astype(np.int64) + 2
        parent = np.repeat(np.arange(len(top)), fan)
        # child label runs 0..top+1 within each parent's block of rows
        start = np.repeat(np.cumsum(fan) - fan, fan)
        label = (np.arange(len(parent)) - start).astype(np.int8)
        codes = np.hstack([codes[parent], label[:, None]])
        top = np.maximum(top[parent], label)
    return codes


def bell_number_oracle(n: int) -> int:
    """Count set partitions of an ``n``-set by explicit enumeration."""
    return len(set_partition_codes(n))
