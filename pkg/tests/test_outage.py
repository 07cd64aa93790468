"""Outage closed forms, their reductions, and the Monte Carlo engine."""

import dataclasses
import math

import numpy as np
import pytest

from dirtymac.channel import AvgSnrPair, Scenario, average_snrs
from dirtymac.gaindist import snr_distribution
from dirtymac.mathutil import rate_to_threshold
from dirtymac.outage import (OutageQuery, _halfwidth, op_doubly_closed,
                             op_montecarlo, op_montecarlo_sweep,
                             op_single_closed, op_single_component1,
                             op_single_component2)

AVG = AvgSnrPair(1.1413441178180375, 0.2609676479698163)


def dists(m, avg=AVG):
    return (snr_distribution(m, avg, "adaptive"),
            snr_distribution(m, avg.scaled(0.8), "adaptive"))


def test_zero_rate_never_in_outage():
    d1, d2 = dists(16)
    assert op_doubly_closed(d1, d2, 0.0) == 0.0


def test_no_ris_doubly_reduction():
    d1, d2 = dists(0)
    gt = rate_to_threshold(1.0)
    want = 1.0 - math.exp(-gt * (1.0 / d1.avg.direct + 1.0 / d2.avg.direct))
    assert op_doubly_closed(d1, d2, 1.0) == pytest.approx(want, abs=1e-12)


def test_no_ris_single_component2_reduction():
    d1, _ = dists(0)
    gt = rate_to_threshold(0.7)
    want = 1.0 - math.exp(-gt / d1.avg.direct)
    assert op_single_component2(d1, 0.7) == pytest.approx(want, abs=1e-12)


def test_single_mixture_affine_in_rho():
    d1, d2 = dists(8)
    p1 = op_single_component1(d1, d2, 0.5)
    p2 = op_single_component2(d1, 1.0)
    for rho in (0.0, 0.3, 1.0):
        q = OutageQuery(model="single", rt_single=1.0, r2_single=0.5, rho=rho)
        want = rho * p1 + (1.0 - rho) * p2
        assert op_single_closed(d1, d2, q) == pytest.approx(want, abs=1e-15)


def test_component1_is_doubly_at_r2_rate():
    # both rates, same product form
    d1, d2 = dists(4)
    assert op_single_component1(d1, d2, 0.5) == op_doubly_closed(d1, d2, 0.5)


def test_query_validation():
    with pytest.raises(ValueError):
        OutageQuery(model="single", rho=None)
    with pytest.raises(ValueError):
        OutageQuery(model="doubly", rt_doubly=-1.0)
    with pytest.raises(ValueError):
        OutageQuery(model="single", rho=1.5)
    with pytest.raises(ValueError):
        OutageQuery(model="nonsense")


def test_halfwidth_regimes():
    # mid probability: plain normal interval
    assert _halfwidth(0.5, 10000) == pytest.approx(1.96 * 0.005, rel=1e-3)
    # both saturated ends fall back to Wilson, never zero width
    assert _halfwidth(0.0, 10 ** 6) > 1e-7
    assert _halfwidth(1.0, 10 ** 6) > 1e-7
    assert _halfwidth(2e-6, 10 ** 6) > _halfwidth(0.0, 10 ** 6) * 0.5


def test_mc_deterministic_across_workers():
    s = Scenario(tx_power_dbm=(50.0, 50.0), noise_dbm=10.0, ris_elements=(8, 8))
    q = OutageQuery(model="doubly", rt_doubly=1.0)
    base = op_montecarlo(s, q, 200000, seed=31, workers=1)
    for w in (2, 4, 8):
        got = op_montecarlo(s, q, 200000, seed=31, workers=w)
        assert got == base
    other = op_montecarlo(s, q, 200000, seed=32, workers=4)
    assert other[0] != base[0]


def test_mc_sweep_matches_pointwise_runs():
    s = Scenario(tx_power_dbm=(50.0, 50.0), noise_dbm=10.0, ris_elements=(4, 4))
    q = OutageQuery(model="doubly", rt_doubly=1.0)
    sweep = op_montecarlo_sweep(s, q, 100000, 7, [(1.0, 1.0), (0.5, 0.5)], workers=2)
    single = op_montecarlo(s, q, 100000, seed=7, workers=1)
    assert sweep[0] == single


def test_mc_agrees_with_closed_form_no_ris():
    # exponential law is sampled exactly, so any gap is binomial noise
    s = Scenario(tx_power_dbm=(50.0, 50.0), noise_dbm=10.0, ris_elements=(0, 0))
    avg1, avg2 = average_snrs(s)
    d1 = snr_distribution(0, avg1, "adaptive")
    d2 = snr_distribution(0, avg2, "adaptive")
    q = OutageQuery(model="doubly", rt_doubly=1.0)
    p_cf = op_doubly_closed(d1, d2, rate_to_threshold(1.0))
    p_mc, hw, n = op_montecarlo(s, q, 400000, seed=12, workers=4)
    assert n == 400000
    assert abs(p_cf - p_mc) <= 3.0 * hw


def test_mc_single_model_uses_rho():
    s = Scenario(tx_power_dbm=(50.0, 50.0), noise_dbm=10.0, ris_elements=(2, 2))
    qa = OutageQuery(model="single", rt_single=1.0, r2_single=0.5, rho=0.0)
    qb = OutageQuery(model="single", rt_single=1.0, r2_single=0.5, rho=1.0)
    pa = op_montecarlo(s, qa, 100000, seed=3, workers=1)
    pb = op_montecarlo(s, qb, 100000, seed=3, workers=1)
    assert pa[0] != pb[0]
