"""One-dimensional global maximisation by grid scan plus golden-section refinement."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MaxResult:
    x: float
    value: float
    evaluations: int


def golden_section_max(f: Callable[[float], float], a: float, b: float, xtol: float = 1e-10):
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x), evaluations)``."""
    a, b = min(a, b), max(a, b)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    return (c, fc, evals) if fc >= fd else (d, fd, evals)


def scan_maximize(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    points: int = 4096,
    xtol: float = 1e-10,
    max_refine: int = 8,
) -> MaxResult:
    """Global maximum of a vectorised ``f`` on ``[lo, hi]``.

    ``f`` is sampled on ``points`` equispaced nodes; each grid-local maximum
    (at most ``max_refine``, highest first) is polished by golden-section
    search on its two neighbouring cells.  No unimodality is assumed.
    """
    xs = np.linspace(lo, hi, points)
    ys = np.asarray(f(xs), dtype=float)
    evals = points
    left = np.concatenate(([-np.inf], ys[:-1]))
    right = np.concatenate((ys[1:], [-np.inf]))
    peaks = np.flatnonzero((ys >= left) & (ys >= right))
    peaks = peaks[np.argsort(ys[peaks])[::-1]][:max_refine]

    def scalar(x: float) -> float:
        return float(f(np.array([x]))[0])

    best_x, best_y = float(xs[peaks[0]]), float(ys[peaks[0]])
    for i in peaks:
        a = xs[max(i - 1, 0)]
        b = xs[min(i + 1, points - 1)]
        x, y, k = golden_section_max(scalar, a, b, xtol)
        evals += k
        if y > best_y:
            best_x, best_y = x, y
    return MaxResult(best_x, best_y, evals)
