"""Deterministic, chunk-parallel Monte Carlo baselines.

Reproducibility contract
------------------------
Every estimate is a pure function of ``(trials, master_seed, chunk_size)``,
independent of how many workers execute the chunks:

1. Trials are partitioned into fixed chunks of ``chunk_size`` (the last chunk
   may be short).  Chunk ``i`` derives its own 64-bit seed as
   ``splitmix64(master_seed + (i+1) * 0x9E3779B97F4A7C15 mod 2**64)`` and
   feeds it as the key of a Philox 4x64 counter-based generator.
2. Within a chunk, draws happen in a documented order (see each estimator).
   Complex unit Gaussians come from paired uniforms via the polar Box-Muller
   map ``sqrt(-ln(1-u1)) * exp(2j*pi*u2)``; unit-mean exponentials are
   ``-ln(1-u)``.
3. Per-chunk partial results (integer event counts, or floating partial sums)
   are combined strictly in chunk order.

Workers default to ``min(cpu_count, 4)`` and are capped by the
``FAS_EDOF_THREADS`` environment variable; changing either never changes the
numbers.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .closedform import SnrPoint, db_to_linear, outage_edof
from .correlation import Spectrum, geometry_spectrum
from .errors import InsufficientEventsError
from .fama import FamaConfig
from .geometry import FasGeometry

_Z99 = 2.576  # two-sided 99% normal quantile used for confidence half-widths
_MIN_REPORTABLE_EVENTS = 20
_MIN_SLOPE_EVENTS = 100
_SEED_MODULUS = 1 << 64
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class McConfig:
    """Trial budget, master seed, and the chunking that fixes the streams."""

    trials: int
    master_seed: int
    chunk_size: int = 65536

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")
        if not 0 <= self.master_seed < _SEED_MODULUS:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size!r}")


@dataclass(frozen=True)
class McEstimate:
    """A point estimate with its 99% normal-approximation half-width."""

    value: float
    trials: int
    half_width_99: float
    seed: int


def _splitmix64(state: int) -> int:
    z = state & (_SEED_MODULUS - 1)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 % _SEED_MODULUS
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB % _SEED_MODULUS
    return z ^ (z >> 31)


def _chunk_rng(master_seed: int, chunk_index: int) -> np.random.Generator:
    mixed = (master_seed + (chunk_index + 1) * _GOLDEN_GAMMA) % _SEED_MODULUS
    return np.random.Generator(np.random.Philox(key=_splitmix64(mixed)))


def _chunk_plan(mc: McConfig) -> list[tuple[int, int]]:
    plan = []
    done = 0
    index = 0
    while done < mc.trials:
        size = min(mc.chunk_size, mc.trials - done)
        plan.append((index, size))
        done += size
        index += 1
    return plan


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = min(os.cpu_count() or 1, 4)
    cap = os.environ.get("FAS_EDOF_THREADS")
    if cap:
        workers = min(workers, max(1, int(cap)))
    return max(1, workers)


def _map_chunks(fn: Callable[[int, int], object], mc: McConfig, workers: int | None) -> list:
    plan = _chunk_plan(mc)
    n_workers = _resolve_workers(workers)
    if n_workers <= 1 or len(plan) == 1:
        return [fn(index, size) for index, size in plan]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(lambda job: fn(*job), plan))  # preserves chunk order


def _draw_complex_gaussians(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """(n, k) i.i.d. CN(0, 1) samples; two uniforms per sample, u1 then u2."""
    u1 = rng.random((n, k))
    u2 = rng.random((n, k))
    radius = np.sqrt(-np.log1p(-u1))
    return radius * np.exp(2j * np.pi * u2)


def _draw_exponentials(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """(n, k) i.i.d. unit-mean exponentials via inverse CDF."""
    return -np.log1p(-rng.random((n, k)))


def _probability_estimate(events: int, mc: McConfig) -> McEstimate:
    if events < _MIN_REPORTABLE_EVENTS:
        raise InsufficientEventsError(events, mc.trials, _MIN_REPORTABLE_EVENTS)
    p = events / mc.trials
    half = _Z99 * math.sqrt(p * (1.0 - p) / mc.trials)
    return McEstimate(value=p, trials=mc.trials, half_width_99=half, seed=mc.master_seed)


def _mode_factor(spectrum: Spectrum, rank: int | None = None) -> np.ndarray:
    """Rows are modes: row k of the factor is sqrt(lambda_k) * u_{:,k}^T."""
    if spectrum.eigenvectors is None:
        raise ValueError("spectrum-only mode has no eigenvectors to sample with")
    if rank is None:
        rank = spectrum.order
    return np.sqrt(spectrum.eigenvalues[:rank, None]) * spectrum.eigenvectors.T[:rank, :]


def sample_channel_gains(spectrum: Spectrum, noise: np.ndarray) -> np.ndarray:
    """Per-port gains X_n = |sum_k sqrt(lambda_k) u_{n,k} z_k|^2.

    ``noise`` holds complex unit Gaussians, shape (K,) for one draw or
    (trials, K) for a batch; K may be a truncation rank <= N.
    """
    z = np.asarray(noise)
    if z.ndim not in (1, 2):
        raise ValueError(f"noise must be 1D or 2D, got shape {z.shape}")
    rank = z.shape[-1]
    if not 1 <= rank <= spectrum.order:
        raise ValueError(
            f"noise length {rank} does not match spectrum order {spectrum.order}"
        )
    factor = _mode_factor(spectrum, rank)
    amplitudes = z @ factor
    return np.abs(amplitudes) ** 2


def estimate_outage_exact(
    geom: FasGeometry,
    snr: SnrPoint,
    mc: McConfig,
    workers: int | None = None,
) -> McEstimate:
    """Exact correlated-channel outage: fraction of trials with max gain <= x.

    Per chunk: one (size, N) complex Gaussian block, multiplied by the KL
    factor of the geometry's spectrum.
    """
    spectrum = geometry_spectrum(geom)
    factor = _mode_factor(spectrum)
    x = snr.x

    def run(index: int, size: int) -> int:
        rng = _chunk_rng(mc.master_seed, index)
        z = _draw_complex_gaussians(rng, size, geom.ports)
        gains = np.abs(z @ factor) ** 2
        return int(np.count_nonzero(gains.max(axis=1) <= x))

    events = sum(_map_chunks(run, mc, workers))
    return _probability_estimate(events, mc)


def estimate_capacity(
    model: FasGeometry | int,
    gamma_bar: float,
    mc: McConfig,
    workers: int | None = None,
) -> McEstimate:
    """Sample mean of log2(1 + gbar * max gain).

    ``model`` is either a :class:`FasGeometry` (exact correlated ports) or an
    integer branch count (equal-power independent branches, drawn as unit-mean
    exponentials).  Per chunk: the gain block, then the capacity sum and sum
    of squares, combined in chunk order.
    """
    if not (math.isfinite(gamma_bar) and gamma_bar > 0.0):
        raise ValueError(f"gamma_bar must be finite and > 0, got {gamma_bar!r}")
    if isinstance(model, FasGeometry):
        factor = _mode_factor(geometry_spectrum(model))
        ports = model.ports

        def best_gain(rng: np.random.Generator, size: int) -> np.ndarray:
            z = _draw_complex_gaussians(rng, size, ports)
            return (np.abs(z @ factor) ** 2).max(axis=1)
    else:
        branches = int(model)
        if branches < 1:
            raise ValueError(f"branch count must be >= 1, got {model!r}")

        def best_gain(rng: np.random.Generator, size: int) -> np.ndarray:
            return _draw_exponentials(rng, size, branches).max(axis=1)

    def run(index: int, size: int) -> tuple[float, float]:
        rng = _chunk_rng(mc.master_seed, index)
        rate = np.log2(1.0 + gamma_bar * best_gain(rng, size))
        return float(rate.sum()), float(np.square(rate).sum())

    partials = _map_chunks(run, mc, workers)
    total = 0.0
    total_sq = 0.0
    for s, s2 in partials:
        total += s
        total_sq += s2
    mean = total / mc.trials
    if mc.trials > 1:
        variance = max(0.0, (total_sq - mc.trials * mean * mean) / (mc.trials - 1))
    else:
        variance = 0.0
    half = _Z99 * math.sqrt(variance / mc.trials)
    return McEstimate(value=mean, trials=mc.trials, half_width_99=half, seed=mc.master_seed)


def estimate_fama_outage(
    cfg: FamaConfig,
    gamma_bar: float,
    mc: McConfig,
    workers: int | None = None,
) -> McEstimate:
    """Outage of the branch-model SINR gbar*X_max / (1 + gbar*sum Y).

    Per chunk: the desired user's K* exponentials first, then the M-1
    interferer exponentials.  The threshold test is evaluated in product form
    to avoid the division.
    """
    if not (math.isfinite(gamma_bar) and gamma_bar > 0.0):
        raise ValueError(f"gamma_bar must be finite and > 0, got {gamma_bar!r}")

    def run(index: int, size: int) -> int:
        rng = _chunk_rng(mc.master_seed, index)
        best = _draw_exponentials(rng, size, cfg.kstar).max(axis=1)
        if cfg.users > 1:
            interference = _draw_exponentials(rng, size, cfg.users - 1).sum(axis=1)
        else:
            interference = np.zeros(size)
        outage = gamma_bar * best <= cfg.gamma_th * (1.0 + gamma_bar * interference)
        return int(np.count_nonzero(outage))

    events = sum(_map_chunks(run, mc, workers))
    return _probability_estimate(events, mc)


def estimate_diversity_slope(
    geom: FasGeometry,
    gamma_th: float,
    snr_grid_db: Sequence[float],
    mc: McConfig,
    workers: int | None = None,
) -> float:
    """Negated least-squares slope of log10(outage) against log10(gamma_bar).

    All grid points share one set of channel draws (common random numbers),
    which keeps the full run a single pass and reduces slope noise.  Points
    with fewer than 100 events are dropped with a warning; fewer than three
    surviving points is an error.
    """
    grid = [float(s) for s in snr_grid_db]
    if len(grid) < 3:
        raise ValueError("need at least 3 SNR grid points")
    if max(grid) - min(grid) < 10.0:
        raise ValueError("SNR grid must span at least 10 dB")
    thresholds = np.array([gamma_th / db_to_linear(s) for s in grid])
    spectrum = geometry_spectrum(geom)
    factor = _mode_factor(spectrum)

    def run(index: int, size: int) -> np.ndarray:
        rng = _chunk_rng(mc.master_seed, index)
        z = _draw_complex_gaussians(rng, size, geom.ports)
        best = (np.abs(z @ factor) ** 2).max(axis=1)
        return (best[:, None] <= thresholds[None, :]).sum(axis=0)

    counts = np.sum(_map_chunks(run, mc, workers), axis=0)
    usable = counts >= _MIN_SLOPE_EVENTS
    if int(usable.sum()) < 3:
        raise InsufficientEventsError(int(counts.min()), mc.trials, _MIN_SLOPE_EVENTS)
    if not usable.all():
        dropped = [grid[i] for i in range(len(grid)) if not usable[i]]
        warnings.warn(
            f"dropped SNR points {dropped} dB with fewer than {_MIN_SLOPE_EVENTS} "
            f"events; fitting the slope on {int(usable.sum())} of {len(grid)} points",
            UserWarning,
            stacklevel=2,
        )
    log_gbar = np.array([s / 10.0 for s in grid])[usable]  # log10(gamma_bar)
    log_p = np.log10(counts[usable] / mc.trials)
    slope = np.polyfit(log_gbar, log_p, 1)[0]
    return float(-slope)


def estimate_accuracy_ratio(
    geom: FasGeometry,
    snr: SnrPoint,
    mc: McConfig,
    workers: int | None = None,
) -> float:
    """Equal-power closed form divided by the exact Monte Carlo outage."""
    estimate = estimate_outage_exact(geom, snr, mc, workers=workers)
    events = int(round(estimate.value * estimate.trials))
    if events < _MIN_SLOPE_EVENTS:
        raise InsufficientEventsError(events, mc.trials, _MIN_SLOPE_EVENTS)
    return outage_edof(snr.x, geom.edof) / estimate.value


def estimate_truncation_mse(
    spectrum: Spectrum,
    rank: int,
    mc: McConfig,
    workers: int | None = None,
) -> float:
    """Empirical per-port MSE between full and rank-L channel reconstructions.

    The discarded-mode amplitudes are generated directly (modes rank..N of the
    same stream that the full reconstruction would use), so the estimate
    matches the closed form (1/N) * sum_{k>L} lambda_k without forming both
    reconstructions.
    """
    if not 1 <= rank <= spectrum.order:
        raise ValueError(f"rank must be in [1, {spectrum.order}], got {rank!r}")
    factor = _mode_factor(spectrum)
    tail = factor[rank:, :]
    order = spectrum.order

    def run(index: int, size: int) -> float:
        rng = _chunk_rng(mc.master_seed, index)
        z = _draw_complex_gaussians(rng, size, order)
        residual = z[:, rank:] @ tail
        return float(np.sum(np.abs(residual) ** 2))

    total = 0.0
    for partial in _map_chunks(run, mc, workers):
        total += partial
    return total / (mc.trials * order)


def estimate_port_means(
    geom: FasGeometry,
    mc: McConfig,
    workers: int | None = None,
) -> np.ndarray:
    """Empirical mean gain per port; each should sit at 1 (unit-mean fading)."""
    factor = _mode_factor(geometry_spectrum(geom))

    def run(index: int, size: int) -> np.ndarray:
        rng = _chunk_rng(mc.master_seed, index)
        z = _draw_complex_gaussians(rng, size, geom.ports)
        return (np.abs(z @ factor) ** 2).sum(axis=0)

    totals = np.sum(_map_chunks(run, mc, workers), axis=0)
    return totals / mc.trials
