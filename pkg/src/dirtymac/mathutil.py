"""Scalar special-function kernels and unit conversions.

The mixture-gamma sums downstream need the lower incomplete gamma function
at half-integer orders up to the truncation cap. The kernel below uses the
classic split: ascending series for x < s+1, modified-Lentz continued
fraction otherwise, which keeps accuracy uniform across that order range.
A log-space variant backs the regimes where the unregularized value or the
regularized ratio under/overflows.
"""

import math

from .errors import ConvergenceError

_MAX_ITER = 700
_REL_EPS = 1e-16
_TINY = 1e-300


def dbm_to_linear(p_dbm: float) -> float:
    """Convert a dBm power to linear milliwatts, 10**(p/10)."""
    return 10.0 ** (p_dbm / 10.0)


def rate_to_threshold(r: float) -> float:
    """SNR outage threshold 2**r - 1 for a target rate r in bps/Hz."""
    if r < 0:
        raise ValueError(f"rate must be nonnegative, got {r}")
    # expm1 keeps precision for small rates
    return math.expm1(r * math.log(2.0))


def gamma_function(s: float) -> float:
    """Gamma(s) for s > 0."""
    if s <= 0:
        raise ValueError(f"gamma_function requires s > 0, got {s}")
    return math.gamma(s)


def _log_lower_series(s: float, x: float) -> float:
    # ascending series gamma(s,x) = x^s e^-x sum_n x^n / (s (s+1) ... (s+n)),
    # reliable for x < s + 1
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _REL_EPS:
            return s * math.log(x) - x + math.log(total)
    raise ConvergenceError(f"incomplete gamma series stalled at s={s}, x={x}")


def _log_upper_cf(s: float, x: float) -> float:
    # modified Lentz evaluation of the continued fraction for Gamma(s,x),
    # reliable for x >= s + 1
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _REL_EPS:
            return s * math.log(x) - x + math.log(h)
    raise ConvergenceError(f"incomplete gamma fraction stalled at s={s}, x={x}")


def log_lower_incomplete_gamma(s: float, x: float) -> float:
    """log of the lower incomplete gamma function, stable for large s.

    Args:
        s: order, s > 0.
        x: integration limit, x > 0 (x = 0 has no finite log).

    Returns:
        log(gamma(s, x)).
    """
    if s <= 0:
        raise ValueError(f"order must be positive, got s={s}")
    if x <= 0:
        raise ValueError(f"log form needs x > 0, got x={x}")
    if x < s + 1.0:
        return _log_lower_series(s, x)
    # gamma = Gamma - Gamma_upper; form the complement through the
    # regularized Q so the subtraction happens on O(1) numbers
    log_gamma_s = math.lgamma(s)
    q = math.exp(_log_upper_cf(s, x) - log_gamma_s)
    if q >= 1.0:
        raise ConvergenceError(f"regularized complement >= 1 at s={s}, x={x}")
    return log_gamma_s + math.log1p(-q)


def lower_incomplete_gamma(s: float, x: float) -> float:
    """Lower incomplete gamma function gamma(s, x) = int_0^x t^(s-1) e^-t dt.

    Monotone nondecreasing in x with gamma(s, inf) = Gamma(s).

    Args:
        s: order, s > 0.
        x: upper integration limit, x >= 0.

    Raises:
        ValueError: if s <= 0 or x < 0.
    """
    if s <= 0:
        raise ValueError(f"order must be positive, got s={s}")
    if x < 0:
        raise ValueError(f"limit must be nonnegative, got x={x}")
    if x == 0.0:
        return 0.0
    return math.exp(log_lower_incomplete_gamma(s, x))


def regularized_lower_gamma(s: float, x: float) -> float:
    """P(s, x) = gamma(s, x) / Gamma(s), in [0, 1]."""
    if s <= 0:
        raise ValueError(f"order must be positive, got s={s}")
    if x < 0:
        raise ValueError(f"limit must be nonnegative, got x={x}")
    if x == 0.0:
        return 0.0
    return math.exp(log_lower_incomplete_gamma(s, x) - math.lgamma(s))
