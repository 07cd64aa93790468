"""Incomplete-gamma kernel and unit conversions against quadrature oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from dirtymac.mathutil import (dbm_to_linear, gamma_function,
                               log_lower_incomplete_gamma,
                               lower_incomplete_gamma,
                               rate_to_threshold,
                               regularized_lower_gamma)

# adaptive quadrature of t^(s-1) e^-t, frozen so the suite never depends on
# scipy agreeing with itself across versions
QUAD_FROZEN = [
    (1.5, 2.0, 0.6545103734517772),
    (0.5, 0.25, 0.9225620128255855),
    (7.5, 3.0, 37.89711615639913),
    (19.5, 30.0, 2.725516787115477e16),
]


def test_dbm_round_numbers():
    assert dbm_to_linear(0.0) == 1.0
    assert dbm_to_linear(30.0) == pytest.approx(1000.0, rel=1e-15)
    assert dbm_to_linear(-10.0) == pytest.approx(0.1, rel=1e-15)


def test_rate_to_threshold_values():
    assert rate_to_threshold(0.0) == 0.0
    assert rate_to_threshold(1.0) == pytest.approx(1.0, rel=1e-15)
    assert rate_to_threshold(2.0) == pytest.approx(3.0, rel=1e-15)
    # expm1 path keeps tiny rates accurate
    assert rate_to_threshold(1e-12) == pytest.approx(1e-12 * math.log(2), rel=1e-10)


def test_gamma_function_matches_math():
    for s in (0.5, 1.0, 1.5, 7.5, 30.0):
        assert gamma_function(s) == pytest.approx(math.gamma(s), rel=1e-15)


@pytest.mark.parametrize("s,x,frozen", QUAD_FROZEN)
def test_lower_incomplete_gamma_frozen(s, x, frozen):
    assert lower_incomplete_gamma(s, x) == pytest.approx(frozen, rel=1e-12)


def test_lower_incomplete_gamma_edges():
    assert lower_incomplete_gamma(2.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        lower_incomplete_gamma(-1.0, 1.0)
    with pytest.raises(ValueError):
        lower_incomplete_gamma(1.0, -0.5)


def test_lower_incomplete_gamma_vs_quadrature_grid():
    # both series and continued-fraction branches get exercised
    worst = 0.0
    for s in (0.3, 0.5, 1.5, 4.5, 9.5, 19.5, 29.5):
        for x in (0.01 * s, 0.5 * s, s, 2.0 * s, 5.0 * s):
            ref, err = integrate.quad(
                lambda t: t ** (s - 1.0) * math.exp(-t), 0.0, x,
                epsabs=1e-300, epsrel=1e-13, limit=300)
            got = lower_incomplete_gamma(s, x)
            rel = abs(got - ref) / ref
            worst = max(worst, rel)
    assert worst < 1e-10


def test_log_form_consistency():
    for s, x in ((0.5, 1e-8), (5.5, 0.3), (19.5, 2.0), (2.0, 40.0)):
        lg = log_lower_incomplete_gamma(s, x)
        direct = lower_incomplete_gamma(s, x)
        if direct > 0.0:
            assert lg == pytest.approx(math.log(direct), abs=1e-12)


def test_log_form_deep_tail():
    # below float underflow of the plain value, leading series term dominates
    s, x = 30.0, 1e-12
    lg = log_lower_incomplete_gamma(s, x)
    lead = s * math.log(x) - math.log(s)
    assert lg == pytest.approx(lead, rel=1e-10)


def test_regularized_bounds():
    for s in (0.5, 3.0, 12.0):
        vals = [regularized_lower_gamma(s, x) for x in np.linspace(0.0, 8.0 * s, 50)]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(b >= a - 1e-14 for a, b in zip(vals, vals[1:]))
    assert regularized_lower_gamma(3.0, 1e6) == pytest.approx(1.0, abs=1e-14)


@given(s=st.floats(0.3, 40.0), frac=st.floats(0.0, 6.0))
@settings(max_examples=200, deadline=None)
def test_incomplete_gamma_monotone_and_bounded(s, frac):
    x = frac * s
    v = lower_incomplete_gamma(s, x)
    assert 0.0 <= v <= gamma_function(s) * (1.0 + 1e-13)
    v2 = lower_incomplete_gamma(s, x + 0.1)
    assert v2 >= v - 1e-13 * max(1.0, v)


@given(a=st.floats(-40.0, 40.0), b=st.floats(-40.0, 40.0))
@settings(max_examples=100, deadline=None)
def test_dbm_products(a, b):
    assert dbm_to_linear(a + b) == pytest.approx(
        dbm_to_linear(a) * dbm_to_linear(b), rel=1e-12)
