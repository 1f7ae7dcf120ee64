"""Calibration of the ``p`` parameter of the ``B_n(p, q)`` location family.

For each k the equation ``b_k = B_k(p, q)`` is solved for p; the estimate
``p_hat(m)`` is the plain mean of those roots over k = 10..m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import specfn
from .errors import DomainError, NoRootError
from .norming import LOG_2PI, BGeneral, approx_location, exact_b

FIRST_K = 10
_BRACKETS = ((-5.0, 5.0), (-20.0, 20.0))


@dataclass(frozen=True)
class CalibrationResult:
    m: int
    q: float
    p_hat: float
    per_k: list[tuple[int, float]]


def _radicand_gap(p: float, l2: float, lt: float, q: float, b2: float) -> float:
    """``B_k(p, q)^2 - b_k^2``; increasing in p and -inf as ``l2 + p -> 0``."""
    if l2 + p <= 0:
        return -math.inf
    return lt - math.log(lt) + (math.log(l2 + p) - 2.0) / (l2 + q) - b2


def _solve(k: int, q: float, b: float) -> float:
    l2 = 2.0 * math.log(k)
    lt = l2 - LOG_2PI
    if not l2 + q > 0:
        raise DomainError(f"B_k(p, q) needs 2 log k + q > 0, got k = {k}, q = {q!r}")
    b2 = b * b
    for lo, hi in _BRACKETS:
        lo = max(lo, math.nextafter(-l2, 0.0))
        if lo >= hi:
            continue
        g_lo = _radicand_gap(lo, l2, lt, q, b2)
        g_hi = _radicand_gap(hi, l2, lt, q, b2)
        if g_lo < 0 < g_hi:
            return brentq(_radicand_gap, lo, hi, args=(l2, lt, q, b2), xtol=1e-15, rtol=8.9e-16)
    raise NoRootError(f"no root of b_k = B_k(p, {q!r}) for p in [-20, 20] at k = {k}")


def solve_p(k: int, q: float = -LOG_2PI) -> float:
    """Root p of ``b_k = B_k(p, q)``; unique because B_k increases in p."""
    if k < FIRST_K:
        raise DomainError(f"solve_p needs k >= {FIRST_K}, got {k}")
    return _solve(int(k), q, exact_b(k))


def residual(k: int, p: float, q: float = -LOG_2PI) -> float:
    return exact_b(k) - approx_location(BGeneral(p, q), k)


def p_hat(m: int, q: float = -LOG_2PI) -> CalibrationResult:
    """Mean of the roots p_k over k = 10..m (compensated summation)."""
    if m < FIRST_K:
        raise DomainError(f"p_hat needs m >= {FIRST_K}, got {m}")
    ks = np.arange(FIRST_K, m + 1)
    bs = specfn.std_normal_quantile_upper(specfn.TailProbability.from_log(-np.log(ks)))
    per_k = [(int(k), _solve(int(k), q, float(b))) for k, b in zip(ks, bs)]
    mean = math.fsum(p for _, p in per_k) / len(per_k)
    return CalibrationResult(int(m), float(q), mean, per_k)
