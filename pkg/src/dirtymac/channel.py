"""Scenario geometry, average SNRs, Rayleigh fading, RIS-aligned gains.

Distance and fading are kept separate on purpose: every fading amplitude is
drawn with E[amp^2] = 1 (complex Gaussian, zero mean, unit variance) and all
path loss lives in the average SNRs gamma_hat, gamma_tilde. The per-user
instantaneous SNR is the additive model

    gamma_i = gamma_hat_i * |h_i|^2 + gamma_tilde_i * H_i^2,

where H_i = sum_m h_im g_im is the aligned cascade gain; the direct/RIS cross
term is dropped (the two paths see distinct path losses) and leakage through
the other user's surface is taken as exactly zero.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import GeometryError
from .mathutil import dbm_to_linear

Point = Tuple[float, float, float]

# E[amp^2] = 1 for Rayleigh with this scale
RAYLEIGH_SCALE = 1.0 / math.sqrt(2.0)

# substream domains for counter-based generators; part of the reproducibility
# contract, do not renumber
DOMAIN_OUTAGE_MC = 1
DOMAIN_ERGODIC_MC = 2
DOMAIN_REALIZATION = 3
DOMAIN_VALIDATE = 4

# chunk width for vectorized Monte Carlo; part of the stream layout, fixed
MC_CHUNK = 65536


def fading_stream(seed: int, domain: int, *key: int) -> np.random.Generator:
    """Counter-based generator for the (domain, key...) substream of a seed.

    The same (seed, domain, key) always yields the same draws regardless of
    which worker evaluates it, which is what makes parallel Monte Carlo
    byte-reproducible.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(domain, *key))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class Scenario:
    """Full experiment description: geometry, powers, noise, RIS sizes.

    Interference variances are taken in the strong-interference limit and
    carry no numeric role; the annotation field records that.
    """

    receiver_pos: Point = (0.0, 0.0, 6.0)
    user_pos: Tuple[Point, Point] = ((20.0, 0.0, 1.0), (-20.0, 0.0, 1.0))
    ris_pos: Tuple[Point, Point] = ((20.0, 0.0, 2.0), (-20.0, 0.0, 2.0))
    tx_power_dbm: Tuple[float, float] = (60.0, 60.0)
    noise_dbm: float = -10.0
    alpha_direct: float = 3.0
    alpha_user_ris: float = 3.0
    alpha_ris_rx: float = 3.5
    ris_elements: Tuple[int, int] = (32, 32)
    interference_note: str = "strong interference: Q1, Q2 -> inf (no numeric role)"

    def __post_init__(self):
        if self.alpha_direct <= 0 or self.alpha_user_ris <= 0 or self.alpha_ris_rx <= 0:
            raise ValueError("path-loss exponents must be positive")
        for m in self.ris_elements:
            if m < 0 or int(m) != m:
                raise ValueError(f"ris_elements must be nonnegative integers, got {m}")
        pts = [self.receiver_pos, *self.user_pos, *self.ris_pos]
        for p in pts:
            if len(p) != 3 or not all(math.isfinite(c) for c in p):
                raise ValueError(f"positions must be finite 3D points, got {p}")
        for i in (0, 1):
            trio = (self.user_pos[i], self.ris_pos[i], self.receiver_pos)
            for a in range(3):
                for b in range(a + 1, 3):
                    if trio[a] == trio[b]:
                        raise GeometryError(
                            f"user {i + 1}: coincident nodes {trio[a]} and {trio[b]}"
                        )


@dataclass(frozen=True)
class AvgSnrPair:
    """Average SNRs of one user: direct path (gamma_hat) and RIS path (gamma_tilde)."""

    direct: float
    ris: float

    def __post_init__(self):
        if self.direct < 0 or self.ris < 0:
            raise ValueError("average SNRs must be nonnegative")

    def scaled(self, c: float) -> "AvgSnrPair":
        return AvgSnrPair(self.direct * c, self.ris * c)


@dataclass(frozen=True)
class LinkRealization:
    """One fading draw for both users.

    direct_amp[i] is |h_i|; cascade_amp[i] has shape (M_i, 2) with columns
    (h_im, g_im); cascade_phase[i] has shape (M_i, 3) with columns
    (theta_im, psi_im, phi_im). Amplitudes are nonnegative.
    """

    direct_amp: np.ndarray
    cascade_amp: Tuple[np.ndarray, np.ndarray]
    cascade_phase: Tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        if np.any(self.direct_amp < 0):
            raise ValueError("direct amplitudes must be nonnegative")
        for amp, ph in zip(self.cascade_amp, self.cascade_phase):
            if amp.shape[0] != ph.shape[0]:
                raise ValueError("amplitude/phase lists disagree on element count")
            if amp.ndim != 2 or amp.shape[1] != 2 or (ph.size and ph.shape[1] != 3):
                raise ValueError("cascade arrays must be (M,2) and (M,3)")
            if np.any(amp < 0):
                raise ValueError("cascade amplitudes must be nonnegative")


def _dist(a: Point, b: Point) -> float:
    return math.dist(a, b)


def distances(s: Scenario):
    """Per-user distance triple (user-receiver, user-RIS, RIS-receiver) in m."""
    out = []
    for i in (0, 1):
        d_hat = _dist(s.user_pos[i], s.receiver_pos)
        d_bar = _dist(s.user_pos[i], s.ris_pos[i])
        d_til = _dist(s.ris_pos[i], s.receiver_pos)
        if min(d_hat, d_bar, d_til) <= 0.0:
            raise GeometryError(f"user {i + 1}: zero-length link")
        out.append((d_hat, d_bar, d_til))
    return tuple(out)


def average_snrs(s: Scenario) -> Tuple[AvgSnrPair, AvgSnrPair]:
    """Average SNRs from powers and path loss, all in linear units.

    gamma_hat = P / (d_hat^a_direct * N)
    gamma_tilde = P / (d_bar^a_user_ris * d_til^a_ris_rx * N)
    """
    n_mw = dbm_to_linear(s.noise_dbm)
    out = []
    for i, (d_hat, d_bar, d_til) in enumerate(distances(s)):
        p_mw = dbm_to_linear(s.tx_power_dbm[i])
        g_hat = p_mw / (d_hat**s.alpha_direct * n_mw)
        g_til = p_mw / (d_bar**s.alpha_user_ris * d_til**s.alpha_ris_rx * n_mw)
        out.append(AvgSnrPair(g_hat, g_til))
    return tuple(out)


def sample_fading(rng: np.random.Generator, s: Scenario) -> LinkRealization:
    """Draw one LinkRealization.

    Draw order is fixed (direct pair, then per user: amplitudes, then theta,
    psi) so a seeded stream reproduces the same realization. Aligned phases
    phi = theta + psi are stored in the third phase column.
    """
    direct = rng.rayleigh(RAYLEIGH_SCALE, size=2)
    amps = []
    phases = []
    for i in (0, 1):
        m = s.ris_elements[i]
        amp = rng.rayleigh(RAYLEIGH_SCALE, size=(m, 2))
        th_psi = rng.uniform(0.0, 2.0 * math.pi, size=(m, 2))
        ph = np.column_stack([th_psi, th_psi.sum(axis=1)]) if m else np.empty((0, 3))
        amps.append(amp)
        phases.append(ph)
    return LinkRealization(direct, (amps[0], amps[1]), (phases[0], phases[1]))


def effective_gain(lr: LinkRealization, user: int, mode: str = "aligned") -> float:
    """Effective channel amplitude of one user.

    aligned: |h| + sum_m h_im g_im, the ideal-phase outer bound.
    explicit: |h + sum_m g_im h_im exp(j(phi - theta - psi))| for the stored
    phases; never exceeds the aligned value.
    """
    d = float(lr.direct_amp[user])
    amp = lr.cascade_amp[user]
    if mode == "aligned":
        return d + float(amp.prod(axis=1).sum()) if amp.size else d
    if mode == "explicit":
        ph = lr.cascade_phase[user]
        if not amp.size:
            return d
        rot = ph[:, 2] - ph[:, 0] - ph[:, 1]
        total = d + np.sum(amp.prod(axis=1) * np.exp(1j * rot))
        return float(abs(total))
    raise ValueError(f"unknown mode {mode!r}")


def instantaneous_snrs(lr: LinkRealization, avgs) -> np.ndarray:
    """Additive instantaneous SNRs for both users (aligned phases assumed)."""
    out = np.empty(2)
    for i in (0, 1):
        d2 = float(lr.direct_amp[i]) ** 2
        amp = lr.cascade_amp[i]
        h = float(amp.prod(axis=1).sum()) if amp.size else 0.0
        out[i] = avgs[i].direct * d2 + avgs[i].ris * h * h
    return out


def sample_snr_chunk(rng: np.random.Generator, s: Scenario, avgs, n: int):
    """Vectorized draws of n instantaneous SNR pairs.

    Exact Rayleigh-product channel, not the Gaussian approximation: this is
    the Monte Carlo ground truth the closed forms are compared against.
    Draw order (user 1 direct, user 1 cascade h then g, user 2 ...) is part
    of the stream contract.
    """
    out = []
    for i in (0, 1):
        d = rng.rayleigh(RAYLEIGH_SCALE, size=n)
        snr = avgs[i].direct * d * d
        m = s.ris_elements[i]
        if m > 0:
            h = rng.rayleigh(RAYLEIGH_SCALE, size=(n, m))
            g = rng.rayleigh(RAYLEIGH_SCALE, size=(n, m))
            cas = np.einsum("ij,ij->i", h, g)
            snr = snr + avgs[i].ris * cas * cas
        out.append(snr)
    return out[0], out[1]


def chunk_bounds(n: int):
    """Fixed partition of n trials into MC_CHUNK-wide blocks."""
    edges = list(range(0, n, MC_CHUNK)) + [n]
    return [(edges[k], edges[k + 1]) for k in range(len(edges) - 1)]
