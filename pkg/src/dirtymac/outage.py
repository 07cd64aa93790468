"""Closed-form outage probabilities and the Monte Carlo estimator.

Doubly dirty at target rate Rt:  P = 1 - (1 - F1(gt)) (1 - F2(gt)),
gt = 2^Rt - 1. Single dirty is the rho-mixture of two components:
component 1 applies the same product form at the user-2 rate threshold,
component 2 is F1 at the sum-rate threshold (only user 1's distribution
enters). rho has no canonical value and must be supplied explicitly.

The MC engine samples the exact Rayleigh-product channel (not the Gaussian
surrogate behind the closed forms) so it is the ground truth in comparisons.
Trials are split into fixed-width chunks, each chunk drawing from the
(seed, domain, chunk-index) substream and contributing exact integer event
counts; the counts are summed in chunk order, so the result is byte-identical
for any worker count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .channel import (
    DOMAIN_OUTAGE_MC,
    Scenario,
    average_snrs,
    chunk_bounds,
    fading_stream,
    sample_snr_chunk,
)
from .gaindist import SnrDistribution, cdf_gamma_closed
from .mathutil import rate_to_threshold

_Z95 = 1.959963984540054  # two-sided 95% normal quantile

# below this expected event count the normal interval is replaced by Wilson
WILSON_EVENT_FLOOR = 10.0


@dataclass(frozen=True)
class OutageQuery:
    """Outage model and rate targets. rho is required for the single model."""

    model: str = "doubly"
    rt_doubly: float = 1.0
    rt_single: float = 1.0
    r2_single: float = 0.5
    rho: Optional[float] = None

    def __post_init__(self):
        if self.model not in ("doubly", "single"):
            raise ValueError(f"unknown outage model {self.model!r}")
        for r in (self.rt_doubly, self.rt_single, self.r2_single):
            if r < 0:
                raise ValueError("rate targets must be nonnegative")
        if self.rho is not None and not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [0, 1]")
        if self.model == "single" and self.rho is None:
            raise ValueError("single model requires an explicit rho")


@dataclass(frozen=True)
class OutageResult:
    closed_form: float
    mc_estimate: Optional[Tuple[float, float, int]] = None  # (p, halfwidth, n)
    quadrature_check: Optional[float] = None

    def consistent(self, tolerance: float = 0.0) -> bool:
        """Closed form within max(3 halfwidths, tolerance) of the MC estimate."""
        if self.mc_estimate is None:
            return True
        p, hw, _ = self.mc_estimate
        return abs(self.closed_form - p) <= max(3.0 * hw, tolerance)


def op_doubly_closed(dist1: SnrDistribution, dist2: SnrDistribution, rt: float) -> float:
    """Doubly dirty outage 1 - (1 - F1(gt)) (1 - F2(gt)) at gt = 2^rt - 1."""
    gt = rate_to_threshold(rt)
    f1 = cdf_gamma_closed(gt, dist1)
    f2 = cdf_gamma_closed(gt, dist2)
    return 1.0 - (1.0 - f1) * (1.0 - f2)


def op_single_component1(dist1: SnrDistribution, dist2: SnrDistribution, r2: float) -> float:
    """User-2 rate outage of the single model; same product form at 2^r2 - 1."""
    return op_doubly_closed(dist1, dist2, r2)


def op_single_component2(dist1: SnrDistribution, rt: float) -> float:
    """Sum-rate outage of the single model: F1 at 2^rt - 1 (user 1 only)."""
    return cdf_gamma_closed(rate_to_threshold(rt), dist1)


def op_single_closed(dist1: SnrDistribution, dist2: SnrDistribution, q: OutageQuery) -> float:
    """rho-mixture of the two single-model components."""
    if q.model != "single" or q.rho is None:
        raise ValueError("query must be a single-model query with rho set")
    p1 = op_single_component1(dist1, dist2, q.r2_single)
    p2 = op_single_component2(dist1, q.rt_single)
    return q.rho * p1 + (1.0 - q.rho) * p2


def _halfwidth(p: float, n: int) -> float:
    # the normal interval degenerates to zero width in either saturated tail,
    # so the Wilson fallback triggers on the rarer outcome count
    if min(p, 1.0 - p) * n < WILSON_EVENT_FLOOR:
        z2 = _Z95 * _Z95
        return (
            _Z95
            * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n))
            / (1.0 + z2 / n)
        )
    return _Z95 * math.sqrt(p * (1.0 - p) / n)


def _chunk_counts(
    s: Scenario, q: OutageQuery, seed: int, ci: int, lo: int, hi: int, scales
) -> np.ndarray:
    # returns per-scale integer event counts for one chunk; two event kinds
    # for the single model (min-capacity and sum-capacity outages)
    avgs = average_snrs(s)
    rng = fading_stream(seed, DOMAIN_OUTAGE_MC, ci)
    g1, g2 = sample_snr_chunk(rng, s, avgs, hi - lo)
    n_ev = 2 if q.model == "single" else 1
    counts = np.zeros((len(scales), n_ev), dtype=np.int64)
    if q.model == "doubly":
        gt = rate_to_threshold(q.rt_doubly)
        for j, (c1, c2) in enumerate(scales):
            counts[j, 0] = int(np.count_nonzero(np.minimum(c1 * g1, c2 * g2) <= gt))
    else:
        g2s = rate_to_threshold(q.r2_single)
        gts = rate_to_threshold(q.rt_single)
        for j, (c1, c2) in enumerate(scales):
            counts[j, 0] = int(np.count_nonzero(np.minimum(c1 * g1, c2 * g2) <= g2s))
            counts[j, 1] = int(np.count_nonzero(c1 * g1 <= gts))
    return counts


def op_montecarlo_sweep(
    s: Scenario,
    q: OutageQuery,
    n: int,
    seed: int,
    scales: Sequence[Tuple[float, float]],
    workers: int = 1,
) -> list:
    """MC outage at several per-user SNR scale factors over one set of draws.

    Each entry of scales multiplies (gamma_hat_i, gamma_tilde_i) of user i by
    c_i; the fading draws do not depend on the averages, so all points share
    the same substreams and the sweep costs a single pass. Fixed (seed, n)
    gives byte-identical output for any worker count.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if any(c1 <= 0 or c2 <= 0 for c1, c2 in scales):
        raise ValueError("scale factors must be positive")
    bounds = chunk_bounds(n)
    jobs = [(ci, lo, hi) for ci, (lo, hi) in enumerate(bounds)]

    def run(job):
        ci, lo, hi = job
        return _chunk_counts(s, q, seed, ci, lo, hi, scales)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_chunk = list(pool.map(run, jobs))
    else:
        per_chunk = [run(j) for j in jobs]
    totals = np.zeros_like(per_chunk[0])
    for c in per_chunk:  # fixed chunk order, integer sums
        totals += c

    out = []
    for j in range(len(scales)):
        if q.model == "doubly":
            p = totals[j, 0] / n
        else:
            p = q.rho * (totals[j, 0] / n) + (1.0 - q.rho) * (totals[j, 1] / n)
        out.append((p, _halfwidth(p, n), n))
    return out


def op_montecarlo(s: Scenario, q: OutageQuery, n: int, seed: int, workers: int = 1):
    """MC outage estimate: (probability, 95% half-width, n)."""
    return op_montecarlo_sweep(s, q, n, seed, [(1.0, 1.0)], workers=workers)[0]
