import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcx import bellpoly, specfun


@lru_cache(maxsize=None)
def _count_partitions(m, l):
    # textbook recurrence p(m, l) = p(m-1, l-1) + p(m-l, l)
    if m == 0 and l == 0:
        return 1
    if m <= 0 or l <= 0:
        return 0
    return _count_partitions(m - 1, l - 1) + _count_partitions(m - l, l)


def test_partition_examples():
    assert bellpoly.enumerate_partitions(2, 2) == [(2,)]
    assert bellpoly.enumerate_partitions(3, 2) == [(1, 1)]
    assert len(bellpoly.enumerate_partitions(6, 3)) == 3


@pytest.mark.parametrize("m", range(1, 31))
def test_partition_counts_and_constraints(m):
    for l in range(1, m + 1):
        parts = bellpoly.enumerate_partitions(m, l)
        assert len(parts) == _count_partitions(m, l)
        assert len(set(parts)) == len(parts)
        for js in parts:
            assert sum(js) == l
            assert sum((i + 1) * j for i, j in enumerate(js)) == m


def test_partition_bad_args():
    with pytest.raises(ValueError):
        bellpoly.enumerate_partitions(2, 3)
    with pytest.raises(ValueError):
        bellpoly.enumerate_partitions(3, 0)


def test_bell_examples():
    assert bellpoly.bell_partial(3, 3, [2.0, 0.0, 0.0]) == 8.0
    assert bellpoly.bell_partial(2, 1, [5.0, 7.0]) == 7.0
    assert bellpoly.bell_partial(4, 2, [1.0, 2.0, 0.0]) == 12.0
    with pytest.raises(ValueError):
        bellpoly.bell_partial(5, 2, [1.0, 2.0])


def test_bell_stirling_numbers():
    # B_{m,l}(1, 1, ...) is the Stirling number of the second kind
    from scipy.special import stirling2
    for m in range(1, 12):
        for l in range(1, m + 1):
            assert bellpoly.bell_partial(m, l, [1.0] * m) == pytest.approx(float(stirling2(m, l, exact=True)))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.data())
def test_bell_homogeneity(m, data):
    l = data.draw(st.integers(1, m))
    xs = data.draw(st.lists(st.floats(-2, 2), min_size=m, max_size=m))
    t = data.draw(st.floats(0.3, 2.0))
    scaled = [t ** (i + 1) * x for i, x in enumerate(xs)]
    lhs = bellpoly.bell_partial(m, l, scaled)
    rhs = t ** m * bellpoly.bell_partial(m, l, xs)
    scale = t ** m * bellpoly.bell_partial(m, l, [abs(x) for x in xs])
    assert abs(lhs - rhs) <= 1e-10 * max(scale, 1e-300)


def test_bell_exact_matches_float():
    xs = [Fraction(3, 2), Fraction(-1, 3), 2, 5, Fraction(1, 7)]
    for m in range(1, 6):
        for l in range(1, m + 1):
            assert float(bellpoly.bell_partial_exact(m, l, xs)) == pytest.approx(
                bellpoly.bell_partial(m, l, [float(x) for x in xs]), rel=1e-13, abs=1e-13)


def test_bell_log_path_for_huge_arguments():
    xs = [1e120, 3e150, -2e130]
    lg, sign = bellpoly.bell_partial_log(3, 2, xs)
    # B_{3,2} = 3 x_1 x_2
    assert sign == 1 and lg == pytest.approx(math.log(3) + math.log(1e120) + math.log(3e150), rel=1e-14)


def test_power_examples():
    assert bellpoly.poly_power_coeffs([1.0, 2.0, 3.0], 1) == [1.0, 2.0, 3.0]
    assert bellpoly.poly_power_coeffs([1.0, 1.0], 2) == pytest.approx([1.0, 2.0, 1.0])
    c = specfun.hermite_coeffs(2)
    np.testing.assert_allclose(bellpoly.poly_power_coeffs(c, 2), np.convolve(c, c), rtol=1e-13, atol=1e-15)
    with pytest.raises(ValueError):
        bellpoly.poly_power_coeffs([], 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-3, 3).filter(lambda v: abs(v) > 1e-3), min_size=1, max_size=7),
       st.integers(1, 6))
def test_power_equals_repeated_convolution(coeffs, p):
    ref = np.array([1.0])
    for _ in range(p):
        ref = np.convolve(ref, coeffs)
    got = np.array(bellpoly.poly_power_coeffs(coeffs, p))
    # per-coefficient relative error, measured against the magnitude scale
    # of that coefficient (the same convolution on |c|)
    mag = np.array([1.0])
    for _ in range(p):
        mag = np.convolve(mag, np.abs(coeffs))
    assert np.all(np.abs(got - ref) <= 1e-10 * mag)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=1, max_size=6),
       st.integers(1, 6))
def test_exact_power_is_exact(coeffs, p):
    ref = [Fraction(1)]
    for _ in range(p):
        new = [Fraction(0)] * (len(ref) + len(coeffs) - 1)
        for i, a in enumerate(ref):
            for j, b in enumerate(coeffs):
                new[i + j] += a * b
        ref = new
    assert bellpoly.poly_power_coeffs_exact(coeffs, p) == ref


def test_power_log_path_large_hermite():
    # factorial-weighted arguments overflow doubles: the log-space branch runs
    c = specfun.hermite_coeffs(40)
    got = bellpoly.poly_power_coeffs(c, 2)
    exact = bellpoly.poly_power_coeffs_exact([Fraction(v) for v in c], 2)
    scale = max(abs(float(v)) for v in exact)
    assert max(abs(g - float(e)) for g, e in zip(got, exact)) <= 1e-9 * scale
