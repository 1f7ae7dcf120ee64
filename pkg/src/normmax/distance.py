"""Distance between the law of the normalised Gaussian maximum and the Gumbel law.

``Phi^n(a x + b)`` is always handled as ``n * log Phi(a x + b)`` so that
sample sizes up to (and beyond) 10^100 stay exact in double precision.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import specfn
from .errors import DomainError, InvalidPairError
from .norming import (
    AuxiliaryKind,
    LogSize,
    Method,
    NormingPair,
    as_logsize,
    norming_pair,
)
from .optimize import scan_maximize

# 1e-18 cut-offs for the search bracket, plus a margin in x
_EDGE = 1e-18
_MARGIN = 2.0
SCAN_POINTS = 4096
REFINE_XTOL = 1e-10

TABLE2_EXPONENTS = (1, 3, 10, 30, 50, 60)
TABLE2_ROWS = (
    (Method.EXACT, AuxiliaryKind.FISHER_TIPPETT),
    (Method.EXACT, AuxiliaryKind.HALL),
    (Method.EXACT, AuxiliaryKind.CANONICAL),
    (Method.HALL_STAR, AuxiliaryKind.FISHER_TIPPETT),
    (Method.HALL_STAR, AuxiliaryKind.HALL),
)


@dataclass(frozen=True)
class DistanceReport:
    n: LogSize
    pair: NormingPair
    sup: float
    argmax: float
    scaled: float
    evaluations: int
    bracket: tuple[float, float]


def log_max_cdf(n, pair: NormingPair, x):
    """``log Phi^n(a x + b) = n log(1 - Q(a x + b))``, never underflowing."""
    n = as_logsize(n)
    xa = np.asarray(x, dtype=float)
    y = pair.scale * xa + pair.location
    lq = specfn.log_survival(np.atleast_1d(y))
    q = np.exp(lq)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = np.where(q > 0, -np.log1p(-q) / q, 1.0)
        tail = -np.exp(n.log_n + lq) * ratio
        body = n.n * specfn.log_cdf(np.atleast_1d(y))
    out = np.where(q < 1e-3, tail, body)
    return float(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)


def diff(n, pair: NormingPair, x):
    """``Phi^n(a x + b) - Lambda(x)``."""
    return np.exp(log_max_cdf(n, pair, x)) - specfn.gumbel_cdf(x)


def _x_at_log_max_cdf(n: LogSize, pair: NormingPair, target: float) -> float:
    """Solve ``n log Phi(a x + b) = target`` (target < 0) for x."""
    log_c = math.log(-target) - n.log_n  # c = -log Phi(y)
    c = math.exp(log_c)
    if c < math.log(2.0):
        shrink = 1.0 - 0.5 * c if c < 1e-10 else -math.expm1(-c) / c
        tail = specfn.TailProbability.from_log(log_c + math.log(shrink))
        y = specfn.std_normal_quantile_upper(tail)
    else:
        y = -specfn.std_normal_quantile_upper(specfn.TailProbability.from_log(-c))
    return (y - pair.location) / pair.scale


def bracket(n, pair: NormingPair) -> tuple[float, float]:
    """Interval outside which both CDFs are within 1e-18 of 0 or 1."""
    n = as_logsize(n)
    log_edge = math.log(_EDGE)
    log_top = math.log1p(-_EDGE)
    try:
        lo = min(-math.log(-log_edge), _x_at_log_max_cdf(n, pair, log_edge))
        hi = max(-math.log(-log_top), _x_at_log_max_cdf(n, pair, log_top))
    except (DomainError, ValueError, OverflowError) as exc:
        raise InvalidPairError(f"cannot bracket {pair.label} at n = {n.label}: {exc}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InvalidPairError(f"degenerate bracket for {pair.label} at n = {n.label}")
    return lo - _MARGIN, hi + _MARGIN


def sup_distance(n, pair: NormingPair, tol: float = 1e-8) -> DistanceReport:
    """Global supremum over the real line of ``|Phi^n(a x + b) - Lambda(x)|``."""
    if not 1e-12 <= tol <= 1e-3:
        raise DomainError(f"tol must lie in [1e-12, 1e-3], got {tol!r}")
    n = as_logsize(n)
    lo, hi = bracket(n, pair)
    res = scan_maximize(
        lambda x: np.abs(diff(n, pair, x)), lo, hi, points=SCAN_POINTS,
        xtol=min(REFINE_XTOL, tol),
    )
    return DistanceReport(n, pair, res.value, res.x, res.value * n.log_n, res.evaluations, (lo, hi))


def _cell(args):
    n, method, aux, tol = args
    return sup_distance(n, norming_pair(method, aux, n), tol).scaled


def scaled_distance_table(
    n_list: Sequence, method_aux_list: Sequence = TABLE2_ROWS, tol: float = 1e-8, jobs: int = 1
) -> np.ndarray:
    """Matrix of ``sup * log n``; rows follow ``method_aux_list``, columns ``n_list``."""
    sizes = [as_logsize(n) for n in n_list]
    cells = [(n, m, a, tol) for (m, a) in method_aux_list for n in sizes]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_cell, cells))
    else:
        values = [_cell(c) for c in cells]
    return np.array(values, dtype=float).reshape(len(method_aux_list), len(sizes))


def table2(tol: float = 1e-8, jobs: int = 1) -> np.ndarray:
    return scaled_distance_table(
        [LogSize.pow10(k) for k in TABLE2_EXPONENTS], TABLE2_ROWS, tol, jobs
    )


def normalized_max_pdf(n, pair: NormingPair, x):
    """Density of ``(M_n - b)/a``: ``n a phi(a x + b) Phi^{n-1}(a x + b)``."""
    n = as_logsize(n)
    xa = np.asarray(x, dtype=float)
    y = pair.scale * xa + pair.location
    lmc = log_max_cdf(n, pair, xa)
    log_phi = specfn.log_pdf(y)
    keep = -math.expm1(-n.log_n)  # (n - 1)/n
    with np.errstate(under="ignore"):
        out = np.exp(n.log_n + math.log(pair.scale) + log_phi + lmc * keep)
    return float(out) if xa.ndim == 0 else out
