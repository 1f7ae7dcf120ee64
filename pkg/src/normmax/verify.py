"""Numerical certificates for the bounds on b_n and on the Gumbel distance.

Every check produces :class:`BoundCertificate` records, ``lhs < rhs``
strictly, with no slack.  Suites bundle the certificates the command line
reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import specfn
from .distance import log_max_cdf, sup_distance
from .errors import DomainError
from .norming import (
    AuxiliaryKind,
    LogSize,
    Method,
    NormingPair,
    approx_location,
    as_logsize,
    exact_b,
    hall_b_star,
    norming_pair,
)
from .optimize import scan_maximize
from .quadrature import integrate

_SQRT_E = math.sqrt(math.e)
_LOG4PI = math.log(4.0 * math.pi)


@dataclass(frozen=True)
class BoundCertificate:
    name: str
    argument: object
    lhs: float
    rhs: float
    margin: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "margin", self.rhs - self.lhs)
        object.__setattr__(self, "passed", bool(self.rhs - self.lhs > 0))

    @property
    def argument_label(self) -> str:
        if isinstance(self.argument, LogSize):
            return self.argument.label
        if isinstance(self.argument, float):
            return repr(self.argument)
        return str(self.argument)


def hall_square_bounds(n) -> tuple[float, float]:
    """``(2 log n - log(4 pi log n), 2 log n)``, the bracket for ``b_n^2``."""
    n = as_logsize(n)
    if n.log_n <= 0:
        raise DomainError(f"hall_square_bounds needs n > 1, got n = {n.label}")
    return 2.0 * n.log_n - math.log(4.0 * math.pi * n.log_n), 2.0 * n.log_n


def check_prop4(n) -> tuple[BoundCertificate, BoundCertificate]:
    n = as_logsize(n)
    lower, upper = hall_square_bounds(n)
    b2 = exact_b(n) ** 2
    return (
        BoundCertificate("prop4.lower", n, lower, b2),
        BoundCertificate("prop4.upper", n, b2, upper),
    )


def k_constant(n0) -> float:
    """``b_{n0}^2 / log n0``."""
    n0 = as_logsize(n0)
    if n0.log_n < math.log(3.0) - 1e-15:
        raise DomainError(f"k_constant needs n0 >= 3, got {n0.label}")
    return exact_b(n0) ** 2 / n0.log_n


def _inv_n(n0: LogSize) -> float:
    return math.exp(-n0.log_n)


def _log_over_n_minus_1(n0: LogSize) -> float:
    """``log n0 / (n0 - 1)`` without forming n0."""
    return n0.log_n * math.exp(-n0.log_n) / -math.expm1(-n0.log_n)


def cminus(n0) -> float:
    """Constant for the negative half-line; equals 1 up to n0 = 15."""
    n0 = as_logsize(n0)
    if n0.log_n < math.log(3.0) - 1e-15:
        raise DomainError(f"cminus needs n0 >= 3, got {n0.label}")
    if n0.n <= 15:
        return 1.0
    b2 = exact_b(n0) ** 2
    return (2.0 / (3.0 * b2)) * n0.log_n + n0.log_n * _inv_n(n0) / _SQRT_E


def theorem_constant(n0) -> float:
    """Constant C(n0) of the 1/log n rate with the (b_n, b_n/(1+b_n^2)) pair."""
    n0 = as_logsize(n0)
    if n0.n < 5:
        raise DomainError(f"theorem_constant needs n0 >= 5, got {n0.label}")
    return cminus(n0)


def theorem_constant_tilde(n0) -> float:
    """Explicit upper bound for C(n0) obtained from the lower bound on b_n^2."""
    n0 = as_logsize(n0)
    if n0.n < 16:
        raise DomainError(f"theorem_constant_tilde needs n0 >= 16, got {n0.label}")
    ratio = math.log(4.0 * math.pi * n0.log_n) / (2.0 * n0.log_n)
    if not ratio < 1:
        raise DomainError(f"theorem_constant_tilde undefined at n0 = {n0.label}")
    return (1.0 / 3.0) / (1.0 - ratio) + n0.log_n * _inv_n(n0) / _SQRT_E


def cplus(n0) -> float:
    n0 = as_logsize(n0)
    if n0.log_n < math.log(3.0) - 1e-15:
        raise DomainError(f"cplus needs n0 >= 3, got {n0.label}")
    b2 = exact_b(n0) ** 2
    return n0.log_n / (math.e * b2) + 0.5 * _log_over_n_minus_1(n0)


def cbarplus(n0) -> float:
    n0 = as_logsize(n0)
    if n0.log_n < math.log(3.0) - 1e-15:
        raise DomainError(f"cbarplus needs n0 >= 3, got {n0.label}")
    b2 = exact_b(n0) ** 2
    k = (math.sqrt(2.0) + 1.0) / math.exp(math.sqrt(2.0))
    return k * n0.log_n / b2 + 0.5 * _log_over_n_minus_1(n0)


# -- decomposition of log Phi^n ------------------------------------------------


@dataclass(frozen=True)
class DecompositionSample:
    n: LogSize
    x: float
    i_n: float
    c_n: float
    s_n: float
    s_n_bound: float

    @property
    def inside(self) -> bool:
        return 0.0 < self.s_n < self.s_n_bound


def _require_exact_location(n: LogSize, pair: NormingPair):
    b = exact_b(n)
    if abs(pair.location - b) > 1e-12 * max(1.0, abs(b)):
        raise DomainError(f"pair location {pair.location!r} is not b_n = {b!r}")


def i_n_integral(n, pair: NormingPair, x: float) -> float:
    """Integral of the reciprocal Mills ratio from ``b_n`` to ``a x + b_n``."""
    n = as_logsize(n)
    _require_exact_location(n, pair)
    return integrate(specfn.reciprocal_mills, pair.location, pair.scale * x + pair.location,
                     abs_tol=1e-10, max_depth=40)


def decomposition_sample(n, pair: NormingPair, x: float) -> DecompositionSample:
    n = as_logsize(n)
    i_n = i_n_integral(n, pair, x)
    e = math.exp(-i_n)
    inv_n = 1.0 / n.n if math.isfinite(n.n) else math.exp(-n.log_n)
    c_n = e * inv_n
    s_n = (-log_max_cdf(n, pair, x) - e) * inv_n
    bound = c_n * c_n / (2.0 * (1.0 - c_n))
    return DecompositionSample(n, float(x), i_n, c_n, s_n, bound)


DIFE_SIZES = (10, 100, 10_000)
DIFE_POINTS = (-2.0, -0.5, 0.5, 1.0, 3.0)


def dife_certificates(
    sizes: Sequence = DIFE_SIZES, points: Sequence[float] = DIFE_POINTS, tol: float = 1e-8
) -> list[BoundCertificate]:
    """Identity ``Q(a x + b_n) = exp(-I_n(x))/n`` and ``0 < S_n < C_n^2/(2(1-C_n))``."""
    certs = []
    for size in sizes:
        n = as_logsize(size)
        pair = norming_pair(Method.EXACT, AuxiliaryKind.FISHER_TIPPETT, n)
        for x in points:
            s = decomposition_sample(n, pair, x)
            log_nq = n.log_n + specfn.log_survival(pair.scale * x + pair.location)
            arg = f"n={n.label};x={x!r}"
            certs.append(BoundCertificate("dife.identity", arg, abs(log_nq + s.i_n), tol))
            certs.append(BoundCertificate("dife.s_positive", arg, 0.0, s.s_n))
            certs.append(BoundCertificate("dife.s_bound", arg, s.s_n, s.s_n_bound))
    return certs


# -- constants used inside the proofs ------------------------------------------


def _f8(y):
    y = np.asarray(y, dtype=float)
    return 25.0 * y * y / (32.0 * (y * y + 1.0) ** 2) * np.log(y)


def _falta1(y):
    y = np.asarray(y, dtype=float)
    expo = (2.0 - 23.0 * y * y) / (10.0 * (y * y + 1.0)) * np.log(y)
    return 4.0 / math.e**2 * y * y * np.exp(expo)


def _claim(x):
    x = np.asarray(x, dtype=float)
    poly = -x + 0.5 * x * x
    with np.errstate(over="ignore"):
        return poly * np.exp(-x - np.exp(-x) + poly * np.exp(0.6 * x))


PROOF_CONSTANTS = (
    # name, function, search interval, bound on the maximum, argmax interval
    ("f8", _f8, (1.0, 50.0), 0.1, (2.16, 2.17)),
    ("falta1", _falta1, (1.0, 50.0), 0.66, (1.532, 1.533)),
    ("claim", _claim, (-20.0, 0.0), 0.63, (-1.051, -1.050)),
)


def proof_constants_check() -> list[BoundCertificate]:
    """Maxima of the three elementary functions bounded in the proofs.

    For each function two certificates are produced: the maximum lies below
    the stated bound, and the maximiser lies inside the stated interval
    (``|x* - centre| < half-width``).
    """
    certs = []
    for name, f, (lo, hi), bound, (a, b) in PROOF_CONSTANTS:
        res = scan_maximize(f, lo, hi, points=4096, xtol=1e-12)
        x = float(res.x)
        certs.append(BoundCertificate(f"{name}.max", x, float(res.value), bound))
        centre, half = 0.5 * (a + b), 0.5 * (b - a)
        certs.append(BoundCertificate(f"{name}.argmax", x, abs(x - centre), half))
    return certs


# -- distance bounds -----------------------------------------------------------


def theorem1_certify(n0, n_list: Iterable, tol: float = 1e-8) -> list[BoundCertificate]:
    """``sup |Phi^n(a x + b_n) - Lambda| * log n < C(n0)`` for each listed n >= n0."""
    n0 = as_logsize(n0)
    c = theorem_constant(n0)
    certs = []
    for size in n_list:
        n = as_logsize(size)
        if n.log_n < n0.log_n - 1e-12:
            raise DomainError(f"theorem1 needs n >= n0, got n = {n.label} < {n0.label}")
        rep = sup_distance(n, norming_pair(Method.EXACT, AuxiliaryKind.FISHER_TIPPETT, n), tol)
        certs.append(BoundCertificate(f"theorem1.n0={n0.label}", n, rep.scaled, c))
    return certs


def hall_certificates(exponents: Iterable[int] = range(1, 61), tol: float = 1e-8):
    """Hall's pair ``(b*_n, 1/b*_n)``: scaled distance below 3."""
    certs = []
    for k in exponents:
        n = LogSize.pow10(k)
        rep = sup_distance(n, norming_pair(Method.HALL_STAR, AuxiliaryKind.HALL, n), tol)
        certs.append(BoundCertificate("hall.upper", n, rep.scaled, 3.0))
    return certs


def prop4_grid(points: int = 200, max_log10: float = 100.0) -> list[LogSize]:
    logs = np.linspace(math.log(2.0), max_log10 * math.log(10.0), points)
    return [LogSize.from_log(v) for v in logs]


def prop4_certificates(grid: Sequence[LogSize] | None = None) -> list[BoundCertificate]:
    certs = []
    for n in grid if grid is not None else prop4_grid():
        certs.extend(check_prop4(n))
    return certs


def prop5_certificates(grid: Sequence[LogSize] | None = None, pairs_grid: int = 50):
    """Monotonicity of ``b_n^2/log n`` and ``K(n0) log n < b_n^2`` for n > n0."""
    grid = list(grid) if grid is not None else prop4_grid()
    ratios = [exact_b(n) ** 2 / n.log_n for n in grid]
    certs = [
        BoundCertificate("prop5.increasing", grid[i + 1], ratios[i], ratios[i + 1])
        for i in range(len(grid) - 1)
    ]
    logs = np.linspace(math.log(3.0), 100.0 * math.log(10.0), pairs_grid)
    sizes = [LogSize.from_log(v) for v in logs]
    b2 = [exact_b(n) ** 2 for n in sizes]
    for i, n0 in enumerate(sizes):
        k = k_constant(n0)
        for j in range(i + 1, len(sizes)):
            certs.append(
                BoundCertificate(f"prop5.k_bound.n0={n0.label}", sizes[j], k * sizes[j].log_n, b2[j])
            )
    return certs


# -- asymptotic rates ----------------------------------------------------------


def _rate_sequences(exponents: Sequence[int]) -> dict[str, list[float]]:
    seqs: dict[str, list[float]] = {"b-barbeta": [], "b-bstar": [], "barbeta-barbetastar": []}
    for k in exponents:
        n = LogSize.pow10(k)
        ln, lln = n.log_n, math.log(n.log_n)
        b, bar = exact_b(n), approx_location(Method.BAR_BETA, n)
        seqs["b-barbeta"].append(abs(b - bar) * ln**2.5 / lln**2)
        seqs["b-bstar"].append(abs(b - hall_b_star(n)) * ln**1.5)
        seqs["barbeta-barbetastar"].append(
            abs(bar - approx_location(Method.BAR_BETA_STAR, n)) * ln**1.5
        )
    return seqs


def quartile_trend(values: Sequence[float]) -> tuple[float, float]:
    """(mean of the last quarter, mean of the first quarter)."""
    m = max(1, len(values) // 4)
    return math.fsum(values[-m:]) / m, math.fsum(values[:m]) / m


def rate_certificates(exponents: Sequence[int] = range(2, 61)) -> list[BoundCertificate]:
    """Scaled approximation errors show no growth: last-quartile mean below first-quartile mean."""
    certs = []
    for name, values in _rate_sequences(list(exponents)).items():
        last, first = quartile_trend(values)
        certs.append(BoundCertificate(f"rates.{name}", f"10^{exponents[0]}..10^{exponents[-1]}", last, first))
    return certs


def sharpness_floor(exponents: Sequence[int] = (20, 40, 60), tol: float = 1e-8) -> float:
    """Largest scaled distance for the (b_n, A_F(b_n)) pair over the given 10^k."""
    best = 0.0
    for k in exponents:
        n = LogSize.pow10(k)
        rep = sup_distance(n, norming_pair(Method.EXACT, AuxiliaryKind.FISHER_TIPPETT, n), tol)
        best = max(best, rep.scaled)
    return best


THEOREM1_N0 = (5, 16, 10_000)


def theorem1_suite(n0_list: Sequence = THEOREM1_N0, tol: float = 1e-8) -> list[BoundCertificate]:
    certs = []
    for n0 in n0_list:
        n0 = as_logsize(n0)
        sizes = [n0, LogSize.from_log(n0.log_n + math.log(10.0))]
        sizes += [LogSize.pow10(k) for k in (3, 10, 30)]
        certs.extend(theorem1_certify(n0, [n for n in sizes if n.log_n >= n0.log_n - 1e-12], tol))
    return certs


SUITES: dict[str, Callable[..., list[BoundCertificate]]] = {
    "prop4": prop4_certificates,
    "prop5": prop5_certificates,
    "theorem1": theorem1_suite,
    "dife": dife_certificates,
    "proof-constants": proof_constants_check,
    "hall": hall_certificates,
    "rates": rate_certificates,
}
