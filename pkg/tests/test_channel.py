"""Geometry, average SNRs, and the seeded fading streams."""

import dataclasses
import math

import numpy as np
import pytest

from dirtymac.channel import (DOMAIN_OUTAGE_MC, DOMAIN_REALIZATION, MC_CHUNK,
                              AvgSnrPair, Scenario, average_snrs, chunk_bounds,
                              distances, effective_gain, fading_stream,
                              instantaneous_snrs, sample_fading,
                              sample_snr_chunk)
from dirtymac.errors import GeometryError


def test_default_geometry_distances():
    s = Scenario()
    (d1h, d1b, d1t), (d2h, d2b, d2t) = distances(s)
    assert d1h == pytest.approx(math.sqrt(425.0), rel=1e-15)
    assert d1b == pytest.approx(1.0, rel=1e-15)
    assert d1t == pytest.approx(math.sqrt(416.0), rel=1e-15)
    # mirrored layout
    assert (d2h, d2b, d2t) == (d1h, d1b, d1t)


def test_average_snrs_frozen():
    # hand-computed: P=60 dBm, N=-10 dBm, d_hat=sqrt(425), exponents 3/3/3.5
    a1, a2 = average_snrs(Scenario())
    assert a1.direct == pytest.approx(1141.3441178180374, rel=1e-14)
    assert a1.ris == pytest.approx(260.9676479698163, rel=1e-14)
    assert a2.direct == a1.direct and a2.ris == a1.ris


def test_avg_snr_scaling():
    a = AvgSnrPair(3.0, 7.0)
    b = a.scaled(0.5)
    assert (b.direct, b.ris) == (1.5, 3.5)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(alpha_direct=0.0)
    with pytest.raises(ValueError):
        Scenario(ris_elements=(-1, 4))
    with pytest.raises(ValueError):
        Scenario(ris_elements=(2.5, 4))
    with pytest.raises(GeometryError):
        Scenario(user_pos=((0.0, 0.0, 6.0), (-20.0, 0.0, 1.0)))


def test_stream_determinism_and_domain_separation():
    a = fading_stream(7, DOMAIN_OUTAGE_MC, 0).standard_normal(8)
    b = fading_stream(7, DOMAIN_OUTAGE_MC, 0).standard_normal(8)
    c = fading_stream(7, DOMAIN_REALIZATION, 0).standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_chunk_bounds_partition():
    n = 2 * MC_CHUNK + 123
    bounds = chunk_bounds(n)
    assert bounds[0] == (0, MC_CHUNK)
    assert bounds[-1] == (2 * MC_CHUNK, n)
    assert sum(hi - lo for lo, hi in bounds) == n


def test_fading_moments():
    # Rayleigh with scale 1/sqrt(2): E[a^2] = 1, E[a] = sqrt(pi)/2.
    # Product of two independent such draws: E[hg] = pi/4.
    s = Scenario(ris_elements=(8, 8))
    rng = fading_stream(123, DOMAIN_REALIZATION)
    d2 = []
    prod = []
    for _ in range(4000):
        lr = sample_fading(rng, s)
        d2.append(lr.direct_amp[0] ** 2)
        prod.extend(lr.cascade_amp[0].prod(axis=1))
    assert np.mean(d2) == pytest.approx(1.0, abs=0.05)
    assert np.mean(prod) == pytest.approx(math.pi / 4.0, abs=0.01)
    assert np.var(prod) == pytest.approx(1.0 - math.pi ** 2 / 16.0, abs=0.01)


def test_aligned_beats_explicit_phases():
    s = Scenario(ris_elements=(16, 16))
    rng = fading_stream(5, DOMAIN_REALIZATION)
    for _ in range(100):
        lr = sample_fading(rng, s)
        for u in (0, 1):
            assert effective_gain(lr, u, "aligned") >= effective_gain(lr, u, "explicit") - 1e-12


def test_snr_homogeneity():
    s = Scenario(ris_elements=(4, 4))
    avgs = average_snrs(s)
    rng = fading_stream(11, DOMAIN_REALIZATION)
    lr = sample_fading(rng, s)
    base = instantaneous_snrs(lr, avgs)
    scaled = instantaneous_snrs(lr, tuple(a.scaled(3.0) for a in avgs))
    assert scaled == pytest.approx(3.0 * base, rel=1e-14)


def test_snr_chunk_moments_match_mean():
    s = Scenario(ris_elements=(16, 16), tx_power_dbm=(50.0, 50.0), noise_dbm=10.0)
    avgs = average_snrs(s)
    rng = fading_stream(99, DOMAIN_OUTAGE_MC, 0)
    g1, g2 = sample_snr_chunk(rng, s, avgs, 200000)
    m = 16
    mean_expected = avgs[0].direct + avgs[0].ris * (
        (m * math.pi / 4.0) ** 2 + m * (1.0 - math.pi ** 2 / 16.0))
    assert np.mean(g1) == pytest.approx(mean_expected, rel=0.02)
    assert np.mean(g2) == pytest.approx(mean_expected, rel=0.02)


def test_snr_chunk_deterministic():
    s = Scenario(ris_elements=(3, 5))
    avgs = average_snrs(s)
    a = sample_snr_chunk(fading_stream(4, DOMAIN_OUTAGE_MC, 2), s, avgs, 1000)
    b = sample_snr_chunk(fading_stream(4, DOMAIN_OUTAGE_MC, 2), s, avgs, 1000)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_asymmetric_elements_respected():
    s = Scenario(ris_elements=(0, 12))
    avgs = average_snrs(s)
    rng = fading_stream(21, DOMAIN_REALIZATION)
    lr = sample_fading(rng, s)
    assert lr.cascade_amp[0].shape[0] == 0
    assert lr.cascade_amp[1].shape[0] == 12
    snrs = instantaneous_snrs(lr, avgs)
    assert snrs[0] <= avgs[0].direct * lr.direct_amp[0] ** 2 + 1e-12
