"""Capacity regions of the doubly and single dirty MAC under strong interference.

Doubly dirty: the region is the triangle R1 + R2 <= log2(1 + min(g1, g2)).
Single dirty (only user 1 knows the interference): the quadrilateral

    R2 <= log2(1 + min(g1, g2)),  R1 + R2 <= log2(1 + g1).

Both use the squared-gain SNRs of the channel module. Zero-SNR inputs yield
the degenerate region {(0,0)} rather than an error (closure of the region).
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .channel import (
    DOMAIN_ERGODIC_MC,
    DOMAIN_REALIZATION,
    Scenario,
    average_snrs,
    chunk_bounds,
    fading_stream,
    instantaneous_snrs,
    sample_fading,
    sample_snr_chunk,
)


@dataclass(frozen=True)
class RatePair:
    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError("rates must be nonnegative")


@dataclass(frozen=True)
class RateRegion:
    """Polygon of achievable rate pairs, vertices counterclockwise from (0,0)."""

    kind: str
    vertices: Tuple[RatePair, ...]
    sum_cap: float
    r2_cap: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("doubly", "single"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.r2_cap is not None and self.r2_cap > self.sum_cap + 1e-12:
            raise ValueError("r2_cap exceeds sum_cap")


def _log2_1p(g: float) -> float:
    return math.log1p(g) / math.log(2.0)


def _doubly_vertices(sum_cap: float) -> Tuple[RatePair, ...]:
    if sum_cap == 0.0:
        return (RatePair(0.0, 0.0),)
    return (RatePair(0.0, 0.0), RatePair(sum_cap, 0.0), RatePair(0.0, sum_cap))


def _single_vertices(sum_cap: float, r2_cap: float) -> Tuple[RatePair, ...]:
    if sum_cap == 0.0:
        return (RatePair(0.0, 0.0),)
    verts = [RatePair(0.0, 0.0), RatePair(sum_cap, 0.0)]
    if sum_cap - r2_cap > 0.0:
        verts.append(RatePair(sum_cap - r2_cap, r2_cap))
    if r2_cap > 0.0:
        verts.append(RatePair(0.0, r2_cap))
    return tuple(verts)


def doubly_dirty_region(g1: float, g2: float) -> RateRegion:
    """Triangle region with sum capacity log2(1 + min(g1, g2))."""
    if g1 < 0 or g2 < 0:
        raise ValueError("SNRs must be nonnegative")
    cap = _log2_1p(min(g1, g2))
    return RateRegion(kind="doubly", vertices=_doubly_vertices(cap), sum_cap=cap)


def single_dirty_region(g1: float, g2: float) -> RateRegion:
    """Quadrilateral region: r2_cap = log2(1+min), sum_cap = log2(1+g1).

    Collapses to the doubly triangle when g1 = g2.
    """
    if g1 < 0 or g2 < 0:
        raise ValueError("SNRs must be nonnegative")
    r2_cap = _log2_1p(min(g1, g2))
    sum_cap = _log2_1p(g1)
    return RateRegion(
        kind="single",
        vertices=_single_vertices(sum_cap, r2_cap),
        sum_cap=sum_cap,
        r2_cap=r2_cap,
    )


def contains(region: RateRegion, p: RatePair, tol: float = 1e-12) -> bool:
    """Whether p satisfies every constraint of the region within tol."""
    if p.r1 < -tol or p.r2 < -tol:
        return False
    if p.r1 + p.r2 > region.sum_cap + tol:
        return False
    if region.kind == "single" and p.r2 > region.r2_cap + tol:
        return False
    return True


def _mean_snrs(s: Scenario) -> Tuple[float, float]:
    # E[gamma] = gamma_hat * E[|h|^2] + gamma_tilde * E[H^2]
    #          = gamma_hat + gamma_tilde * ((M pi/4)^2 + M (1 - pi^2/16))
    avgs = average_snrs(s)
    out = []
    for i in (0, 1):
        m = s.ris_elements[i]
        eh2 = (m * math.pi / 4.0) ** 2 + m * (1.0 - math.pi**2 / 16.0)
        out.append(avgs[i].direct + avgs[i].ris * eh2)
    return out[0], out[1]


def ergodic_region(
    s: Scenario,
    mode: str = "mean-snr",
    n_trials: int = 1,
    seed: int = 0,
    kind: str = "doubly",
) -> RateRegion:
    """Region under fading, by one of three labeled averaging conventions.

    mean-snr: region evaluated at E[gamma_i] (a deterministic proxy).
    per-realization: region of a single sampled fading draw.
    ergodic-mc: caps averaged over n_trials draws,
        sum_cap = mean log2(1 + min(g1, g2)) (doubly), and for the single
        model additionally sum_cap = mean log2(1 + g1) with the min-based
        average as r2_cap. Fixed seed gives bit-identical results; trials are
        partitioned into fixed chunks with per-chunk substreams and the
        per-chunk sums are reduced in chunk order.

    None of the three is claimed to be the one behind any published curve;
    outputs are labeled with the mode.
    """
    if kind not in ("doubly", "single"):
        raise ValueError(f"unknown region kind {kind!r}")
    if mode == "mean-snr":
        g1, g2 = _mean_snrs(s)
    elif mode == "per-realization":
        rng = fading_stream(seed, DOMAIN_REALIZATION, 0)
        lr = sample_fading(rng, s)
        g1, g2 = instantaneous_snrs(lr, average_snrs(s))
    elif mode == "ergodic-mc":
        if n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        avgs = average_snrs(s)
        ln2 = math.log(2.0)
        sum_min = 0.0
        sum_g1 = 0.0
        for ci, (lo, hi) in enumerate(chunk_bounds(n_trials)):
            rng = fading_stream(seed, DOMAIN_ERGODIC_MC, ci)
            g1c, g2c = sample_snr_chunk(rng, s, avgs, hi - lo)
            sum_min += float(np.log1p(np.minimum(g1c, g2c)).sum()) / ln2
            sum_g1 += float(np.log1p(g1c).sum()) / ln2
        cap_min = sum_min / n_trials
        cap_g1 = sum_g1 / n_trials
        if kind == "doubly":
            return RateRegion("doubly", _doubly_vertices(cap_min), cap_min)
        r2_cap = min(cap_min, cap_g1)
        return RateRegion("single", _single_vertices(cap_g1, r2_cap), cap_g1, r2_cap)
    else:
        raise ValueError(f"unknown averaging mode {mode!r}")
    if kind == "doubly":
        return doubly_dirty_region(g1, g2)
    return single_dirty_region(g1, g2)
