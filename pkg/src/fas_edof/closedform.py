"""Single-user closed-form outage and capacity expressions.

Five outage models (equal-power EDoF, weighted independent modes, full i.i.d.,
block-correlation, single antenna), the high-SNR power law, the exact
required-SNR inversion, and ergodic capacity both as an alternating
exponential-integral series and as an adaptive-quadrature oracle.

All functions take linear-scale SNRs; dB conversion happens once, at the CLI
boundary (:func:`db_to_linear` / :func:`linear_to_db`).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .correlation import BranchWeights
from .errors import NumericError
from .specfun import (
    GAMMA_EM,
    scaled_exp_integral_e1,
    stable_alternating_binomial_sum,
)

_LN2 = math.log(2.0)
_CAPACITY_SERIES_MAX_BRANCHES = 20

logger = logging.getLogger(__name__)


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        raise ValueError(f"dB conversion requires a positive value, got {value!r}")
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class SnrPoint:
    """Average SNR and outage threshold, both linear scale."""

    gamma_bar: float
    gamma_th: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gamma_bar) and self.gamma_bar > 0.0):
            raise ValueError(f"gamma_bar must be finite and > 0, got {self.gamma_bar!r}")
        if not (math.isfinite(self.gamma_th) and self.gamma_th > 0.0):
            raise ValueError(f"gamma_th must be finite and > 0, got {self.gamma_th!r}")

    @property
    def x(self) -> float:
        """Normalized threshold gamma_th / gamma_bar."""
        return self.gamma_th / self.gamma_bar

    @classmethod
    def from_db(cls, snr_db: float, threshold_db: float) -> "SnrPoint":
        return cls(gamma_bar=db_to_linear(snr_db), gamma_th=db_to_linear(threshold_db))


@dataclass(frozen=True)
class BcmParams:
    """Block-correlation model: D independent blocks of B equi-correlated ports."""

    blocks: int
    block_size: int
    rho: float

    def __post_init__(self) -> None:
        if self.blocks < 1:
            raise ValueError(f"blocks must be >= 1, got {self.blocks!r}")
        if self.block_size < 1:
            raise ValueError(f"block_size must be >= 1, got {self.block_size!r}")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must be in [0, 1), got {self.rho!r}")

    @property
    def ports(self) -> int:
        return self.blocks * self.block_size


def default_blocks(kstar: int) -> int:
    """Customary block count for the BCM baseline, ceil(K*/2)."""
    return (kstar + 1) // 2


def _check_x(x: float) -> None:
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"normalized threshold x must be finite and > 0, got {x!r}")


def outage_edof(x: float, kstar: int) -> float:
    """(1 - e^-x)^K*: selection combining over K* unit-mean branches."""
    _check_x(x)
    if kstar < 1:
        raise ValueError(f"kstar must be >= 1, got {kstar!r}")
    return (-math.expm1(-x)) ** kstar


def outage_iid(x: float, ports: int) -> float:
    """Fully independent N-port reference, (1 - e^-x)^N."""
    _check_x(x)
    if ports < 1:
        raise ValueError(f"ports must be >= 1, got {ports!r}")
    return (-math.expm1(-x)) ** ports


def outage_single(x: float) -> float:
    """No-diversity baseline, 1 - e^-x."""
    _check_x(x)
    return -math.expm1(-x)


def outage_wim(x: float, weights: BranchWeights) -> float:
    """Weighted-independent-modes product, prod_k (1 - e^{-x/beta_k})."""
    _check_x(x)
    result = 1.0
    for beta in weights.beta:
        if beta <= 0.0:
            raise ValueError(f"branch weights must be > 0, got {beta!r}")
        result *= -math.expm1(-x / beta)
    return result


def outage_bcm(x: float, params: BcmParams) -> float:
    """Block-correlation baseline.

    Each block contributes 1 - e^-y sum_{l<B} y^l/l! with y = x/(1-rho); the
    subtracted sum is the regularized upper-Gamma tail Q(B, y), built by
    forward recurrence.  When Q is close to 1 the complement is formed
    directly from the l >= B tail to dodge the cancellation.
    """
    _check_x(x)
    y = x / (1.0 - params.rho)
    b = params.block_size
    block_factor = _erlang_cdf(b, y)
    return block_factor ** params.blocks


def _erlang_cdf(b: int, y: float) -> float:
    # P(Gamma(b, 1) <= y) = 1 - Q(b, y),  Q(b, y) = e^-y sum_{l=0}^{b-1} y^l/l!
    if y > 745.0:
        return 1.0
    term = math.exp(-y)
    upper_tail = term
    for ell in range(1, b):
        term *= y / ell
        upper_tail += term
    if upper_tail <= 0.5:
        return 1.0 - upper_tail
    # forward recurrence on the complementary (l >= b) Poisson tail
    log_t = -y + b * math.log(y) - math.lgamma(b + 1)
    t = math.exp(log_t)
    total = t
    ell = b
    while t > 1e-18 * total and ell < b + 10_000:
        ell += 1
        t *= y / ell
        total += t
    return total


def required_snr(target_outage: float, gamma_th: float, kstar: int) -> float:
    """Exact inverse of ``outage_edof``: gamma_bar achieving ``target_outage``."""
    if not 0.0 < target_outage < 1.0:
        raise ValueError(f"target outage must be in (0, 1), got {target_outage!r}")
    if not (math.isfinite(gamma_th) and gamma_th > 0.0):
        raise ValueError(f"gamma_th must be finite and > 0, got {gamma_th!r}")
    if kstar < 1:
        raise ValueError(f"kstar must be >= 1, got {kstar!r}")
    root = math.exp(math.log(target_outage) / kstar)  # P0^(1/K*)
    return -gamma_th / math.log1p(-root)


def asymptotic_outage(x: float, kstar: int, weights: BranchWeights | None = None) -> float:
    """High-SNR power law: x^K* (coding-gain factor one), or x^K*/prod(beta)."""
    _check_x(x)
    if kstar < 1:
        raise ValueError(f"kstar must be >= 1, got {kstar!r}")
    value = x ** kstar
    if weights is not None:
        value /= weights.product()
    return value


def ergodic_capacity_series(gamma_bar: float, kstar: int) -> float:
    """Closed-form ergodic capacity of K*-branch selection combining, bits/s/Hz.

    (K*/ln 2) sum_j C(K*-1, j) (-1)^j/(j+1) e^{(j+1)/gbar} E1((j+1)/gbar),
    with the scaled exponential integral fused to avoid overflow at low SNR.
    Beyond 20 branches the alternating sum loses too many digits, so the
    quadrature path is used instead (logged once per call).
    """
    if not (math.isfinite(gamma_bar) and gamma_bar > 0.0):
        raise ValueError(f"gamma_bar must be finite and > 0, got {gamma_bar!r}")
    if kstar < 1:
        raise ValueError(f"kstar must be >= 1, got {kstar!r}")
    if kstar > _CAPACITY_SERIES_MAX_BRANCHES:
        logger.info(
            "capacity series with %d branches would lose precision; "
            "falling back to quadrature", kstar,
        )
        return capacity_quadrature(gamma_bar, kstar)

    def term(j: int) -> float:
        z = (j + 1) / gamma_bar
        return scaled_exp_integral_e1(z) / (j + 1)

    total = stable_alternating_binomial_sum(kstar - 1, term)
    return kstar * total / _LN2


def capacity_quadrature(gamma_bar: float, kstar: int) -> float:
    """Adaptive quadrature of the order-statistics capacity integral.

    Serves as the independent oracle for the series and as the fallback for
    large K*.  Raises :class:`NumericError` if the 1e-9 absolute tolerance is
    not certified by the integrator.
    """
    if not (math.isfinite(gamma_bar) and gamma_bar > 0.0):
        raise ValueError(f"gamma_bar must be finite and > 0, got {gamma_bar!r}")
    if kstar < 1:
        raise ValueError(f"kstar must be >= 1, got {kstar!r}")
    from scipy import integrate

    def integrand(x: float) -> float:
        if x <= 0.0:
            return 0.0
        cdf = -math.expm1(-x)
        return math.log2(1.0 + gamma_bar * x) * kstar * cdf ** (kstar - 1) * math.exp(-x)

    value, abserr = integrate.quad(
        integrand, 0.0, math.inf, epsabs=1e-12, epsrel=1e-12, limit=400
    )
    if abserr > 1e-9:
        raise NumericError(
            f"capacity quadrature tolerance not met (error estimate {abserr:.3e})"
        )
    return value


def capacity_high_snr_asymptote(gamma_bar: float, kstar: int) -> float:
    """log2(gbar) + gamma_EM/ln2 + log2(H_K*): the quoted high-SNR capacity law."""
    if not (math.isfinite(gamma_bar) and gamma_bar > 0.0):
        raise ValueError(f"gamma_bar must be finite and > 0, got {gamma_bar!r}")
    from .specfun import harmonic

    return math.log2(gamma_bar) + GAMMA_EM / _LN2 + math.log2(harmonic(kstar))
