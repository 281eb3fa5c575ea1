from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropgc.growth import (
    DENOMINATOR,
    NUMERATOR,
    PowerSeries,
    f_series,
    growth_report,
    lie_dimensions,
    lie_dimensions_by_log,
    p_coefficients,
    p_coefficients_by_series,
    residue_at_alpha,
    roots,
)


def test_first_coefficients():
    a = p_coefficients(10)
    assert a[1] == a[2] == 0
    assert a[3] == 3
    assert a[:8] == [0, 0, 0, 3, 0, 5, 3, 7]


def test_recurrence_matches_series_division():
    assert p_coefficients(30) == p_coefficients_by_series(30)


def test_lie_dimensions_small():
    A = lie_dimensions(12)
    assert A[3] == 1 and A[4] == 0 and A[5] == 1 and A[6] == 0
    # [s3, s5] is the first bracket
    assert A[8] == 1


def test_moebius_matches_log_expansion():
    assert lie_dimensions(30) == lie_dimensions_by_log(30)


def test_lie_dimensions_integral_nonnegative_to_400():
    A = lie_dimensions(400)
    a = p_coefficients(400)
    assert all(x >= 0 for x in A)
    assert all(A[n] > 0 for n in range(3, 401, 2))
    for n in (1, 6, 60, 360, 397):
        assert sum(d * A[d] for d in range(1, n + 1) if n % d == 0) == a[n]


def test_moebius_rejects_bad_input():
    with pytest.raises(ArithmeticError):
        lie_dimensions(3, [0, 0, 0, 1])


def test_roots():
    alpha, beta = roots()
    assert abs(alpha - 0.75488) < 1e-4
    assert abs(beta - 1.3247) < 1e-4
    assert abs(beta ** 3 - beta - 1) < 1e-10
    assert abs(1 - alpha ** 2 - alpha ** 3) < 1e-12


def test_residue():
    alpha, _ = roots()
    res, est = residue_at_alpha()
    assert abs(res + alpha) < 1e-8
    assert abs(est + alpha) < 1e-8


def test_report():
    rep = growth_report(400)
    assert rep.converged
    assert all(abs(r.product - 1) < 1e-6 for r in rep.rows if r.n >= 200)
    lines = rep.to_csv().splitlines()
    assert lines[0] == "n,a_n,A_n,product" and len(lines) == 401
    assert lines[3] == "3,3,1,1.29047912700584"
    with pytest.raises(ValueError):
        growth_report(5)


def test_power_series():
    f = f_series(9)
    assert [int(c) for c in f.coeffs] == [0, 0, 0, 1, 0, 1, 0, 1, 0, 1]
    d = PowerSeries(DENOMINATOR, 12)
    one = d * d.inverse()
    assert one.coeffs == [1] + [0] * 12
    with pytest.raises(ZeroDivisionError):
        PowerSeries([0, 1], 3).inverse()
    with pytest.raises(ValueError):
        PowerSeries([1, 1], 3).log_one_minus_inverse()
    # log(1/(1-t)) = sum t^k / k
    log = PowerSeries([0, 1], 6).log_one_minus_inverse()
    assert log.coeffs == [0] + [Fraction(1, k) for k in range(1, 7)]


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_series_product_commutes(a, b):
    x, y = PowerSeries(a, 8), PowerSeries(b, 8)
    assert (x * y).coeffs == (y * x).coeffs
    assert ((x + y) - y).coeffs == x.coeffs


def test_numerator_denominator_constants():
    # (1 - t^2)(1 - t^2 - t^3) expanded
    assert DENOMINATOR == (1, 0, -2, -1, 1, 1)
    assert NUMERATOR == (0, 0, 0, 3, 0, -1)
