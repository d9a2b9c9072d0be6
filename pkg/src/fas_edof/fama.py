"""Multi-user FAMA outage under the equal-power branch model.

The desired user picks the best of K* unit-mean branches while M-1 interferers
contribute i.i.d. unit-mean gains at the selected port, giving the SINR
gbar*X_max / (1 + gbar*sum Y_j).  The outage is an alternating binomial sum
whose gbar -> infinity limit is the interference-limited floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .closedform import outage_edof
from .errors import NumericError
from .specfun import stable_alternating_binomial_sum

_BOUNDARY_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class FamaConfig:
    """Homogeneous M-user configuration: one EDoF count, one linear threshold."""

    users: int
    kstar: int
    gamma_th: float

    def __post_init__(self) -> None:
        if self.users < 1:
            raise ValueError(f"users must be >= 1, got {self.users!r}")
        if self.kstar < 1:
            raise ValueError(f"kstar must be >= 1, got {self.kstar!r}")
        if not (math.isfinite(self.gamma_th) and self.gamma_th > 0.0):
            raise ValueError(f"gamma_th must be finite and > 0, got {self.gamma_th!r}")


def fama_outage(cfg: FamaConfig, gamma_bar: float) -> float:
    """P(SINR <= gamma_th) for the desired user at per-user SNR ``gamma_bar``.

    sum_j C(K*, j) (-1)^j e^{-j gamma_th/gbar} / (1 + j gamma_th)^{M-1}.
    The single-user case reduces exactly to the interference-free formula and
    is returned through it (the alternating form is hopelessly conditioned
    where the true value underflows).
    """
    if not (math.isfinite(gamma_bar) and gamma_bar > 0.0):
        raise ValueError(f"gamma_bar must be finite and > 0, got {gamma_bar!r}")
    x = cfg.gamma_th / gamma_bar
    if cfg.users == 1:
        return outage_edof(x, cfg.kstar)

    def term(j: int) -> float:
        return math.exp(-j * x) / (1.0 + j * cfg.gamma_th) ** (cfg.users - 1)

    value = stable_alternating_binomial_sum(cfg.kstar, term)
    return _clamp_probability(value)


def fama_floor(cfg: FamaConfig) -> float:
    """Interference-limited floor, the gbar -> infinity limit of the outage."""
    if cfg.users == 1:
        return 0.0

    def term(j: int) -> float:
        return 1.0 / (1.0 + j * cfg.gamma_th) ** (cfg.users - 1)

    value = stable_alternating_binomial_sum(cfg.kstar, term)
    return _clamp_probability(value)


def _clamp_probability(value: float) -> float:
    # rounding may push the sum a hair outside [0, 1]; anything larger is a bug
    if -_BOUNDARY_CLAMP_TOL <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + _BOUNDARY_CLAMP_TOL:
        return 1.0
    if not 0.0 <= value <= 1.0:
        raise NumericError(f"outage sum {value!r} is not a probability")
    return value
