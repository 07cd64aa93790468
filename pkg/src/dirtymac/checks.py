"""Self-validation battery behind the `validate` subcommand.

Each check recomputes its target through an independent route (direct
quadrature, Gaussian change of variables, exact Monte Carlo of the product
channel, analytic no-RIS limits) and compares against the closed forms. The
sampling check gates on a CLT-aware threshold: the closed forms inherit the
Gaussian approximation of the cascade gain, whose empirical sup-norm gap
scales like 0.1065/sqrt(M), so demanding better than that from exact-channel
draws would fail for every finite M no matter how many trials are used.

A deliberate negative control corrupts the exponential-rate constant of the
mixture (freezing the misprinted variant, which carries the density argument
inside the constant, at the mean square gain) and requires the quadrature
comparison to catch it.
"""

import math
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np
from scipy import integrate

from .capacity import ergodic_region
from .channel import DOMAIN_VALIDATE, average_snrs, fading_stream, sample_snr_chunk
from .config import RunConfig
from .errors import ConvergenceError
from .gaindist import (
    CLT_WARN_ELEMENTS,
    build_mixture_params,
    cdf_gamma_closed,
    cdf_gamma_quadrature,
    pdf_H2_exact,
    pdf_H2_mixture,
    snr_distribution,
)
from .mathutil import lower_incomplete_gamma
from .outage import op_doubly_closed, op_single_component2

# empirical sup-norm CLT gap per 1/sqrt(M); 1.5x margin gates the KS check
KS_GAP_SCALE = 0.1065
KS_GAP_MARGIN = 1.5


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    warning: Optional[str] = None


def _mix_m(cfg: RunConfig) -> int:
    m = max(cfg.scenario.ris_elements)
    return m if m >= 1 else 32


def check_incomplete_gamma(cfg: RunConfig) -> CheckResult:
    worst = 0.0
    for s in (0.5, 1.5, 7.5, 19.5, 29.5):
        for x in (0.3, 1.0, s + 0.5, 4.0 * s, 90.0):
            ref, _ = integrate.quad(
                lambda t: t ** (s - 1.0) * math.exp(-t), 0.0, x, limit=300, epsrel=1e-13
            )
            worst = max(worst, abs(lower_incomplete_gamma(s, x) / ref - 1.0))
    ok = worst <= 1e-10
    return CheckResult("incomplete-gamma-vs-quadrature", ok, f"max rel err {worst:.2e}")


def check_h2_normalization(cfg: RunConfig) -> CheckResult:
    m = _mix_m(cfg)
    params = build_mixture_params(m, cfg.truncation_policy())
    mean = (m * math.pi / 4.0) ** 2 + m * (1.0 - math.pi**2 / 16.0)
    val, _ = integrate.quad(
        lambda x: pdf_H2_exact(x, params), 0.0, 60.0 * mean,
        points=[mean], limit=400, epsabs=1e-12, epsrel=1e-12,
    )
    err = abs(val - 1.0)
    return CheckResult("h2-pdf-normalization", err <= 1e-8, f"M={m} |integral-1| {err:.2e}")


def check_h2_change_of_variables(cfg: RunConfig) -> CheckResult:
    m = _mix_m(cfg)
    params = build_mixture_params(m, cfg.truncation_policy())
    mu = m * math.pi / 4.0
    s2 = m * (1.0 - math.pi**2 / 16.0)
    mean = mu * mu + s2
    x = np.linspace(mean * 1e-4, 4.0 * mean, 300)
    rx = np.sqrt(x)
    norm = 1.0 / math.sqrt(2.0 * math.pi * s2)
    oracle = norm * (np.exp(-((rx - mu) ** 2) / (2 * s2)) + np.exp(-((rx + mu) ** 2) / (2 * s2)))
    oracle = oracle / (2.0 * rx)
    got = pdf_H2_exact(x, params)
    scale = np.maximum(oracle, 1e-300)
    worst = float(np.max(np.abs(got - oracle) / scale))
    return CheckResult("h2-pdf-change-of-variables", worst <= 1e-12, f"M={m} max rel {worst:.2e}")


def check_h2_mixture(cfg: RunConfig) -> CheckResult:
    m = _mix_m(cfg)
    params = build_mixture_params(m, cfg.truncation_policy())
    mu = m * math.pi / 4.0
    s2 = m * (1.0 - math.pi**2 / 16.0)
    mean = mu * mu + s2
    x = np.linspace(mean * 1e-4, mean + 10.0 * s2, 300)
    exact = pdf_H2_exact(x, params)
    mix = pdf_H2_mixture(x, params)
    worst = float(np.max(np.abs(mix / exact - 1.0)))
    ok = worst <= 1e-10
    return CheckResult(
        "h2-mixture-vs-exact", ok, f"M={m} L={params.truncation} max rel {worst:.2e}"
    )


def _grid(dist, points=60):
    top = 20.0 * dist.mean_snr()
    return np.linspace(0.0, top, points + 2)[1:-1]


def check_cdf_vs_quadrature(cfg: RunConfig) -> CheckResult:
    m = _mix_m(cfg)
    avgs = average_snrs(cfg.scenario)
    dist = snr_distribution(m, avgs[0], cfg.truncation_policy())
    g = _grid(dist)
    sup = float(np.max(np.abs(cdf_gamma_closed(g, dist) - cdf_gamma_quadrature(g, dist))))
    return CheckResult("cdf-closed-vs-quadrature", sup <= 1e-6, f"M={m} sup {sup:.2e}")


def check_cdf_monotone(cfg: RunConfig) -> CheckResult:
    m = _mix_m(cfg)
    avgs = average_snrs(cfg.scenario)
    dist = snr_distribution(m, avgs[0], cfg.truncation_policy())
    vals = cdf_gamma_closed(_grid(dist, 1000), dist)
    mono = bool(np.all(np.diff(vals) >= -1e-12))
    bounded = bool(vals[0] >= 0.0 and vals[-1] <= 1.0)
    return CheckResult(
        "cdf-monotone-bounds", mono and bounded,
        f"M={m} monotone={mono} range [{vals[0]:.3e}, {vals[-1]:.6f}]",
    )


def check_no_ris_reduction(cfg: RunConfig) -> CheckResult:
    avgs = average_snrs(cfg.scenario)
    d1 = snr_distribution(0, avgs[0])
    d2 = snr_distribution(0, avgs[1])
    gt = 1.0
    got = op_doubly_closed(d1, d2, 1.0)
    want = 1.0 - math.exp(-gt * (1.0 / avgs[0].direct + 1.0 / avgs[1].direct))
    e1 = abs(got - want)
    got2 = op_single_component2(d1, 1.0)
    want2 = 1.0 - math.exp(-gt / avgs[0].direct)
    e2 = abs(got2 - want2)
    ok = e1 <= 1e-12 and e2 <= 1e-12
    return CheckResult("no-ris-analytic-reduction", ok, f"errors {e1:.2e}, {e2:.2e}")


def check_mc_ks(cfg: RunConfig, n: int = 200_000) -> CheckResult:
    m = _mix_m(cfg)
    avgs = average_snrs(cfg.scenario)
    dist = snr_distribution(m, avgs[0], cfg.truncation_policy())
    scen = replace(cfg.scenario, ris_elements=(m, m))
    rng = fading_stream(cfg.seed, DOMAIN_VALIDATE, 0)
    draws, _ = sample_snr_chunk(rng, scen, (avgs[0], avgs[0]), n)
    draws = np.sort(draws)
    ks = 0.0
    for lo in range(0, n, 50_000):
        hi = min(lo + 50_000, n)
        f = cdf_gamma_closed(draws[lo:hi], dist)
        emp_hi = np.arange(lo + 1, hi + 1) / n
        emp_lo = np.arange(lo, hi) / n
        ks = max(ks, float(np.max(np.maximum(np.abs(f - emp_hi), np.abs(f - emp_lo)))))
    gate = KS_GAP_MARGIN * KS_GAP_SCALE / math.sqrt(m) + 2.0 / math.sqrt(n)
    warn = None
    if m < CLT_WARN_ELEMENTS:
        warn = f"M={m} < {CLT_WARN_ELEMENTS}: Gaussian cascade model is a rough fit"
    return CheckResult(
        "mc-ks-instantaneous-snr", ks <= gate, f"M={m} KS {ks:.4f} gate {gate:.4f}", warn
    )


def check_region_nesting(cfg: RunConfig) -> CheckResult:
    ms = sorted(set(cfg.region_m_list) | {0})
    caps = []
    for m in ms:
        scen = replace(cfg.scenario, ris_elements=(m, m))
        caps.append(ergodic_region(scen, mode="mean-snr").sum_cap)
    ok = all(b > a for a, b in zip(caps, caps[1:]))
    detail = ", ".join(f"M={m}: {c:.3f}" for m, c in zip(ms, caps))
    return CheckResult("region-nesting", ok, detail)


def check_zeta_corruption(cfg: RunConfig) -> CheckResult:
    # the misprinted constant keeps the density argument inside; freezing it
    # at E[H^2] gives a concrete wrong value that must trip the quadrature gate
    m = _mix_m(cfg)
    avgs = average_snrs(cfg.scenario)
    params = build_mixture_params(m, cfg.truncation_policy())
    mean_h2 = (m * math.pi / 4.0) ** 2 + m * (1.0 - math.pi**2 / 16.0)
    bad = replace(params, zeta=params.zeta * mean_h2)
    dist = snr_distribution(m, avgs[0], cfg.truncation_policy())
    bad_dist = replace(dist, params=bad)
    g = _grid(dist, 40)
    try:
        sup = float(np.max(np.abs(cdf_gamma_closed(g, bad_dist) - cdf_gamma_quadrature(g, bad_dist))))
        caught = sup > 1e-6
        detail = f"corrupted-zeta sup {sup:.2e} (must exceed 1e-6)"
    except ConvergenceError as e:
        caught = True
        detail = f"corrupted zeta rejected outright: {e}"
    return CheckResult("zeta-corruption-negative-control", caught, detail)


def run_battery(cfg: RunConfig) -> List[CheckResult]:
    checks = [
        check_incomplete_gamma,
        check_h2_normalization,
        check_h2_change_of_variables,
        check_h2_mixture,
        check_cdf_vs_quadrature,
        check_cdf_monotone,
        check_no_ris_reduction,
        check_mc_ks,
        check_region_nesting,
        check_zeta_corruption,
    ]
    return [c(cfg) for c in checks]


def format_report(results: List[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name.ljust(width)}  {status}  {r.detail}")
        if r.warning:
            lines.append(f"{''.ljust(width)}  WARN  {r.warning}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{n_fail} of {len(results)} checks failed" if n_fail else "all checks passed")
    return "\n".join(lines) + "\n"
