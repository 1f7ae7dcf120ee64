"""Exact Monte Carlo sampling of the maximum of n standard normals.

The maximum of n uniforms has the law of ``U**(1/n)``, so one uniform per
draw suffices for any n, including sizes far beyond what could be simulated
directly.  Uniforms come from Philox streams keyed by ``(seed, block)``;
blocks have a fixed length, so the sample does not depend on ``jobs``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import specfn
from .errors import DomainError
from .norming import LogSize, NormingPair, as_logsize

MAX_REPS = 10**8
BLOCK = 1 << 18
_U_BITS = 52


@dataclass(frozen=True)
class SimConfig:
    n: LogSize
    reps: int
    seed: int
    pair: NormingPair

    def __post_init__(self):
        if not 1 <= self.reps <= MAX_REPS:
            raise DomainError(f"reps must lie in [1, {MAX_REPS}], got {self.reps}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class SimReport:
    ks_distance: float
    sample_mean: float
    sample_sd: float
    reps: int


def sample_max(n, u):
    """Maximum of n iid standard normals driven by a uniform ``u`` in (0, 1).

    Returns the normal quantile at ``u**(1/n)``.  The upper tail
    ``-expm1(log(u)/n)`` is carried in logs, so n = 10^100 loses nothing.
    """
    n = as_logsize(n)
    ua = np.asarray(u, dtype=float)
    if np.any(~((ua > 0) & (ua < 1))):
        raise DomainError("u must lie strictly inside (0, 1)")
    u1 = np.atleast_1d(ua)
    # x = -log(u)/n > 0, the log of the lower tail is -x
    log_x = np.log(-np.log(u1)) - n.log_n
    x = np.exp(log_x)
    small = x < 1e-8
    with np.errstate(divide="ignore"):
        shrink = np.where(
            small, np.log1p(-0.5 * np.minimum(x, 1e-8)), np.log(-np.expm1(-x)) - log_x
        )
    log_upper = log_x + shrink
    upper = log_upper <= specfn.LOG_HALF
    out = np.empty_like(u1)
    if upper.any():
        out[upper] = specfn.std_normal_quantile_upper(
            specfn.TailProbability.from_log(log_upper[upper])
        )
    if (~upper).any():
        out[~upper] = -specfn.std_normal_quantile_upper(
            specfn.TailProbability.from_log(-x[~upper])
        )
    return float(out[0]) if ua.ndim == 0 else out.reshape(ua.shape)


def uniforms(seed: int, block: int, size: int) -> np.ndarray:
    """``size`` uniforms on the grid ``(k + 1/2) 2^-52``, strictly inside (0, 1)."""
    rng = np.random.Generator(np.random.Philox(key=seed + (block << 64)))
    k = rng.integers(0, 1 << _U_BITS, size=size, dtype=np.int64)
    return (k.astype(float) + 0.5) * 2.0**-_U_BITS


def _block(cfg: SimConfig, i: int) -> np.ndarray:
    size = min(BLOCK, cfg.reps - i * BLOCK)
    m = sample_max(cfg.n, uniforms(cfg.seed, i, size))
    return (m - cfg.pair.location) / cfg.pair.scale


def draw(cfg: SimConfig, jobs: int = 1) -> np.ndarray:
    """Normalised maxima ``(M_n - b)/a`` in stream order."""
    blocks = range(-(-cfg.reps // BLOCK))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda i: _block(cfg, i), blocks))
    else:
        parts = [_block(cfg, i) for i in blocks]
    return np.concatenate(parts)


def ks_statistic(sample: np.ndarray, cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance of ``sample`` against ``cdf``."""
    z = np.sort(np.asarray(sample, dtype=float))
    m = z.size
    f = np.asarray(cdf(z), dtype=float)
    above = np.arange(1, m + 1) / m - f
    below = f - np.arange(m) / m
    return float(max(above.max(), below.max()))


def simulate(cfg: SimConfig, jobs: int = 1, raw_path: str | Path | None = None) -> SimReport:
    z = draw(cfg, jobs)
    if raw_path is not None:
        np.savetxt(raw_path, z, fmt="%.17g")
    ks = ks_statistic(z, specfn.gumbel_cdf)
    sd = float(np.std(z, ddof=1)) if z.size > 1 else 0.0
    mean = math.fsum(z.tolist()) / z.size
    return SimReport(ks, mean, sd, cfg.reps)
