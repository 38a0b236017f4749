import math
import threading
from fractions import Fraction

import gmpy2
import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from bellray import exact
from bellray.errors import DomainError, PrecisionError, ResourceLimitError
from bellray.exact import (
    PrecisionFloat,
    bell_number_oracle,
    bell_poly,
    enumerate_set_partitions,
    set_partition_codes,
    eval_derivative,
    eval_exact,
    genfun_first_omitted,
    genfun_partial_sum,
    stirling_table,
    working_precision,
)

from oracles import bell_mp, partitions_by_blocks


# frozen from oracles.partitions_by_blocks
ROW3 = [0, 1, 3, 1]
ROW5 = [0, 1, 15, 25, 10, 1]


def test_partition_oracle_rows():
    assert partitions_by_blocks(3) == ROW3
    assert partitions_by_blocks(5) == ROW5


def test_stirling_table_small():
    assert stirling_table(0) == [(1,)]
    t = stirling_table(5)
    assert list(t[3]) == ROW3
    assert list(t[5]) == ROW5


@pytest.mark.parametrize("n", range(0, 7))
def test_rows_match_brute_force(n):
    assert list(stirling_table(n)[n]) == partitions_by_blocks(n)


def test_bell_poly_examples():
    assert bell_poly(0).coeffs == (1,)
    assert list(bell_poly(3).coeffs) == ROW3
    assert list(bell_poly(5).coeffs) == ROW5


@given(st.integers(0, 80))
def test_bell_poly_invariants(n):
    c = bell_poly(n).coeffs
    assert len(c) == n + 1
    assert c[n] == 1
    assert c[0] == (1 if n == 0 else 0)
    if n >= 1:
        assert c[1] == 1
    assert all(v >= 0 for v in c)
    nxt = bell_poly(n + 1).coeffs
    for k in range(1, n + 2):
        assert nxt[k] == k * (c[k] if k <= n else 0) + c[k - 1]


def test_row_sums_increase():
    sums = [sum(bell_poly(n).coeffs) for n in range(1, 40)]
    assert all(b > a for a, b in zip(sums, sums[1:]))


def test_ceiling():
    with pytest.raises(ResourceLimitError):
        stirling_table(10_001)
    with pytest.raises(ResourceLimitError):
        bell_poly(50, ceiling=10)
    with pytest.raises(DomainError):
        bell_poly(-1)


def test_triangle_concurrent_growth():
    tri = exact._StirlingTriangle()
    results = {}

    def work(i):
        results[i] = tri.rows(60 + i % 7)[60]

    threads = [threading.Thread(target=work, args=(i,)) for i in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results.values())) == 1
    assert results[0] == bell_poly(60).coeffs


# -- evaluation ---------------------------------------------------------------

def test_eval_examples():
    assert int(eval_exact(5, 1).value) == 52
    assert int(eval_exact(5, 10).value) == 226510
    for x in (0, 3, -2.5, "7.3", Fraction(1, 3)):
        assert eval_exact(0, x).value == 1


def test_integer_argument_is_exact():
    r = eval_exact(30, -7)
    assert r.err_bound == 0
    assert int(r.value) == bell_poly(30)(-7)


def test_derivative_examples():
    assert eval_derivative(0, 2.5).value == 0
    assert int(eval_derivative(3, 1).value) == 10
    lhs = eval_exact(5, 2).value
    rhs = 2 * (eval_derivative(4, 2).value + eval_exact(4, 2).value)
    assert lhs == rhs


def test_negative_x_escalates_precision():
    n = 40
    expected = math.ceil(n * (1 + math.log(n)) / math.log(2)) + 64
    assert working_precision(n, -1.0) == expected
    assert working_precision(n, 1.0) == exact.DEFAULT_PRECISION
    assert eval_exact(n, -3.5).precision_bits == expected


def test_precision_ceiling():
    with pytest.raises(PrecisionError):
        eval_exact(200, -1.5, max_bits=256)
    with pytest.raises(PrecisionError):
        eval_exact(5, 1.5, precision_bits=512, max_bits=256)


def test_nonfinite_rejected():
    with pytest.raises(DomainError):
        eval_exact(3, math.inf)
    with pytest.raises(DomainError):
        eval_exact(3, "nan")


@given(st.integers(0, 60), st.floats(-200, 200, allow_nan=False))
def test_error_bound_is_sound(n, x):
    low = eval_exact(n, x)
    high = eval_exact(n, x, precision_bits=4000)
    with gmpy2.context(precision=4200):
        diff = abs(low.value - high.value)
    assert diff <= low.abs_error + high.abs_error


@given(st.integers(1, 40), st.floats(-60, 60, allow_nan=False))
def test_matches_explicit_sum_oracle(n, x):
    got = eval_exact(n, x)
    ref = bell_mp(n, x)
    with mpmath.workdps(200):
        assert abs(mpmath.mpf(got.value) - ref) <= mpmath.mpf(got.abs_error) + mpmath.mpf(10) ** -150 * abs(ref)


def test_inexact_input_error_propagates():
    x = PrecisionFloat(gmpy2.mpfr("1.25", 128), 128, err_bound=4.0)
    r = eval_exact(6, x)
    assert r.err_bound > 0


def test_recurrence_identity_sample():
    for n in (0, 7, 23):
        for x in (-3, "1/2", 10):
            a = eval_exact(n + 1, x)
            b = eval_derivative(n, x)
            c = eval_exact(n, x)
            xv = PrecisionFloat.from_value(x, a.precision_bits).value
            with gmpy2.context(precision=4 * a.precision_bits):
                gap = abs(a.value - xv * (b.value + c.value))
                tol = a.abs_error + abs(xv) * (b.abs_error + c.abs_error)
            assert gap <= tol


def test_precision_float_str_and_conversion():
    p = PrecisionFloat.from_value("0.1", 128)
    assert p.err_bound == 0.5
    assert PrecisionFloat.from_value("1/4", 128).err_bound == 0
    assert str(eval_exact(5, 10)) == "226510"
    with pytest.raises(ValueError):
        PrecisionFloat(gmpy2.mpfr(1), 24)


# -- generating function ------------------------------------------------------

def _genfun_oracle(x, t):
    with mpmath.workprec(600):
        return mpmath.exp(mpmath.mpf(x) * (mpmath.exp(mpmath.mpf(t)) - 1))


def test_genfun_example():
    got = genfun_partial_sum(1, 0.5, 20)
    ref = _genfun_oracle(1, 0.5)
    # exp(e^0.5 - 1) = 1.9130929362603843...
    assert float(ref) == pytest.approx(1.9130929362603843, rel=1e-15)
    assert abs(float(got.value) - float(ref)) < 1e-8


def test_genfun_trivial():
    assert genfun_partial_sum(0, 1.3, 10).value == 1
    assert genfun_partial_sum(2.5, 0, 10).value == 1


@pytest.mark.parametrize("x", ["1/2", 1, 2])
@pytest.mark.parametrize("t", [0.1, 0.5])
def test_genfun_truncation(x, t):
    got = genfun_partial_sum(x, t, 30)
    ref = _genfun_oracle(0.5 if x == "1/2" else x, t)
    with mpmath.workprec(600):
        gap = abs(mpmath.mpf(got.value) - ref)
    assert gap < 10 * genfun_first_omitted(x, t, 30)


def test_genfun_domain():
    with pytest.raises(DomainError):
        genfun_partial_sum(1, 3.0, 10)
    with pytest.raises(DomainError):
        genfun_partial_sum(1, 0.1, 0)


# -- brute-force oracle ---------------------------------------------------------

def test_bell_number_oracle_examples():
    assert bell_number_oracle(0) == 1
    assert bell_number_oracle(5) == 52
    assert bell_number_oracle(8) == 4140
    with pytest.raises(DomainError):
        bell_number_oracle(13)


def test_enumeration_yields_partitions():
    for blocks in enumerate_set_partitions(4):
        flat = sorted(i for b in blocks for i in b)
        assert flat == [0, 1, 2, 3]
        assert all(blocks)


@pytest.mark.parametrize("n", range(0, 8))
def test_partition_codes_match_generator(n):
    codes = set_partition_codes(n)
    from_gen = set()
    for blocks in enumerate_set_partitions(n):
        label = [0] * n
        for b, members in enumerate(blocks):
            for i in members:
                label[i] = b
        from_gen.add(tuple(label))
    assert {tuple(int(v) for v in r) for r in codes} == from_gen
    assert len(codes) == len(from_gen)


def test_partition_codes_are_restricted_growth():
    codes = set_partition_codes(9).astype(int)
    assert (codes[:, 0] == 0).all()
    running = np.maximum.accumulate(codes, axis=1)
    assert (codes[:, 1:] <= running[:, :-1] + 1).all()
    assert len({r.tobytes() for r in codes}) == len(codes)
    six = set_partition_codes(6)
    assert list(np.bincount(six.max(axis=1) + 1, minlength=7)) == partitions_by_blocks(6)
