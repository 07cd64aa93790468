"""Capacity regions and outage probabilities for RIS-aided two-user dirty MACs.

The library models a two-user multiple-access channel where additive
interference is known at the transmitters (dirty coding) and each user is
assisted by a reconfigurable intelligent surface with ideally aligned phase
shifts. Instantaneous SNR follows the additive model

    gamma_i = gamma_hat_i * |h_i|^2 + gamma_tilde_i * H_i^2,

with |h_i| Rayleigh and H_i a sum of M Rayleigh products (Gaussian by CLT).
Closed-form SNR distributions use a mixture-gamma expansion and are checked
against quadrature and Monte Carlo oracles throughout.
"""

from .mathutil import (
    dbm_to_linear,
    gamma_function,
    lower_incomplete_gamma,
    rate_to_threshold,
)
from .channel import (
    AvgSnrPair,
    LinkRealization,
    Scenario,
    average_snrs,
    distances,
    effective_gain,
    instantaneous_snrs,
    sample_fading,
)
from .gaindist import (
    MixtureGammaParams,
    SnrDistribution,
    build_mixture_params,
    cdf_gamma_closed,
    cdf_gamma_quadrature,
    pdf_H2_exact,
    pdf_H2_mixture,
    pdf_gamma,
    snr_distribution,
)
from .capacity import (
    RatePair,
    RateRegion,
    contains,
    doubly_dirty_region,
    ergodic_region,
    single_dirty_region,
)
from .outage import (
    OutageQuery,
    OutageResult,
    op_doubly_closed,
    op_montecarlo,
    op_single_closed,
    op_single_component1,
    op_single_component2,
)

__version__ = "0.1.0"
