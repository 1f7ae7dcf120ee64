"""Tail-stable special functions for the standard normal and the Gumbel law.

Everything here accepts Python floats or numpy arrays and returns the same
kind.  Survival probabilities are carried together with their natural
logarithm so that quantities far below the double-precision underflow
threshold (``1/n`` with ``n = 10**400``, say) remain usable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)
LOG_2PI = math.log(2.0 * math.pi)
LOG_HALF = math.log(0.5)
_SQRT_HALF = math.sqrt(0.5)
_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)

_NEWTON_MAX_ITER = 60
_NEWTON_RTOL = 1e-14


def _scalar_or_array(out, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class TailProbability:
    """An upper-tail probability stored as ``(value, log_value)``.

    ``log_value`` is authoritative; ``value`` underflows to 0 below about
    1e-308.  Fields may be floats or equally shaped arrays.
    """

    value: float | np.ndarray
    log_value: float | np.ndarray

    @classmethod
    def from_value(cls, p) -> "TailProbability":
        p_arr = np.asarray(p, dtype=float)
        if np.any((p_arr <= 0) | (p_arr > 1)) or np.any(np.isnan(p_arr)):
            raise DomainError(f"tail probability must lie in (0, 1], got {p!r}")
        return cls(_scalar_or_array(p_arr, p), _scalar_or_array(np.log(p_arr), p))

    @classmethod
    def from_log(cls, log_p) -> "TailProbability":
        lp = np.asarray(log_p, dtype=float)
        if np.any(lp > 0) or np.any(np.isnan(lp)):
            raise DomainError(f"log tail probability must be <= 0, got {log_p!r}")
        return cls(_scalar_or_array(np.exp(lp), log_p), _scalar_or_array(lp, log_p))


def _split_half_square(x):
    """Return (hi, lo) with hi + lo == x*x/2, hi exact and lo small.

    Rounding x to a multiple of 1/64 leaves few enough significant bits that
    the square of the rounded part is exact; the remainder is tiny, so
    ``exp(-hi) * exp(-lo)`` keeps full relative accuracy for |x| up to ~40.
    """
    ax = np.abs(np.asarray(x, dtype=float))
    xh = np.round(ax * 64.0) / 64.0
    xl = ax - xh
    return 0.5 * xh * xh, xh * xl + 0.5 * xl * xl


def _exp_neg_half_square(x):
    hi, lo = _split_half_square(x)
    return np.exp(-hi) * np.exp(-lo)


def std_normal_pdf(x):
    """Standard normal density, accurate to a few ulps far into the tails."""
    out = _exp_neg_half_square(x) / SQRT_2PI
    return _scalar_or_array(out, x)


def log_pdf(x):
    hi, lo = _split_half_square(x)
    return _scalar_or_array(-(hi + lo) - math.log(SQRT_2PI), x)


def _survival_values(x):
    x = np.asarray(x, dtype=float)
    pos = x >= 0
    with np.errstate(over="ignore", under="ignore"):
        right = 0.5 * special.erfcx(np.abs(x) * _SQRT_HALF) * _exp_neg_half_square(x)
        left = 0.5 * special.erfc(x * _SQRT_HALF)
    return np.where(pos, right, left)


def _log_survival_values(x):
    x = np.asarray(x, dtype=float)
    pos = x >= 0
    hi, lo = _split_half_square(x)
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        right = np.log(0.5 * special.erfcx(np.abs(x) * _SQRT_HALF)) - (hi + lo)
        left = np.log1p(-0.5 * special.erfc(np.abs(x) * _SQRT_HALF))
    return np.where(pos, right, left)


def survival(x):
    """``Q(x) = 1 - Phi(x)`` computed without subtraction from one."""
    return _scalar_or_array(_survival_values(x), x)


def log_survival(x):
    """``log Q(x)``; finite for every finite x."""
    return _scalar_or_array(_log_survival_values(x), x)


def log_cdf(x):
    """``log Phi(x)`` via the survival function at ``-x``."""
    return _scalar_or_array(_log_survival_values(-np.asarray(x, dtype=float)), x)


def std_normal_survival(x) -> TailProbability:
    return TailProbability(survival(x), log_survival(x))


def _as_log_tail(p):
    if isinstance(p, TailProbability):
        return np.asarray(p.log_value, dtype=float), p.log_value
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr <= 0) or np.any(np.isnan(p_arr)):
        raise DomainError(f"tail probability must be positive, got {p!r}")
    return np.log(p_arr), p


def std_normal_quantile_upper(p):
    """Return x >= 0 with ``Q(x) = p`` for ``0 < p <= 1/2``.

    ``p`` may be a float, an array, or a :class:`TailProbability`, in which
    case its log field is used so that p far below 1e-308 is fine.  Solved by
    Newton's method on ``log Q(x) - log p`` (derivative ``-phi/Q``) with a
    bisection safeguard.
    """
    log_p, like = _as_log_tail(p)
    if np.any(log_p > LOG_HALF + 1e-15) or np.any(np.isnan(log_p)):
        raise DomainError(f"upper quantile needs 0 < p <= 1/2, got {p!r}")
    log_p = np.minimum(log_p, LOG_HALF)
    lo = np.zeros_like(log_p)
    hi = np.sqrt(np.maximum(-2.0 * log_p, 1.0)) + 1.0

    # seed from the asymptotic inversion y e^y D(1/y) = 1/(2 pi p^2), y = x^2
    big_l = -2.0 * log_p - LOG_2PI
    with np.errstate(invalid="ignore", divide="ignore"):
        safe_l = np.where(big_l > 1.0, big_l, np.e)
        y = safe_l - np.log(safe_l) + (np.log(safe_l) - 2.0) / safe_l
        seed = np.sqrt(np.maximum(y, 0.0))
    x = np.where(big_l > 1.0, np.clip(seed, lo, hi), 0.0)
    x = np.atleast_1d(x).astype(float)
    log_p = np.atleast_1d(log_p)
    lo = np.atleast_1d(lo).astype(float)
    hi = np.atleast_1d(hi).astype(float)

    active = np.ones(x.shape, dtype=bool)
    for _ in range(_NEWTON_MAX_ITER):
        xa = x[active]
        f = _log_survival_values(xa) - log_p[active]
        # f is decreasing in x: tighten the bracket around the root
        lo_a = np.where(f > 0, xa, lo[active])
        hi_a = np.where(f < 0, xa, hi[active])
        lo[active], hi[active] = lo_a, hi_a
        v = _reciprocal_mills_values(xa)
        step = f / v
        x_new = xa + step
        outside = (x_new <= lo_a) | (x_new >= hi_a)
        x_new = np.where(outside & (f != 0), 0.5 * (lo_a + hi_a), x_new)
        step = x_new - xa
        x[active] = x_new
        done = np.abs(step) <= _NEWTON_RTOL * (1.0 + np.abs(x_new))
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    else:
        raise ConvergenceError(
            f"upper quantile did not converge in {_NEWTON_MAX_ITER} iterations"
        )
    if np.ndim(like) == 0:
        return float(x[0])
    return x.reshape(np.shape(like))


def _mills_values(x):
    with np.errstate(over="ignore"):
        return _SQRT_HALF_PI * special.erfcx(np.asarray(x, dtype=float) * _SQRT_HALF)


def _reciprocal_mills_values(x):
    with np.errstate(divide="ignore"):
        return 1.0 / _mills_values(x)


def mills_ratio(x):
    """Mills ratio ``Q(x)/phi(x)`` for ``x >= 0`` via the scaled erfc."""
    if np.any(np.asarray(x) < 0):
        raise DomainError(f"mills_ratio needs x >= 0, got {x!r}")
    return _scalar_or_array(_mills_values(x), x)


def _require_positive(x, name):
    if np.any(np.asarray(x) <= 0):
        raise DomainError(f"{name} needs x > 0, got {x!r}")


def mills_lower(x):
    """Rational lower bound ``x/(x^2+1)`` of the Mills ratio."""
    _require_positive(x, "mills_lower")
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    return x / (x * x + 1.0)


def mills_upper(x):
    """Rational upper bound ``(x^2+2)/(x^3+3x)`` of the Mills ratio."""
    _require_positive(x, "mills_upper")
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    return (x * x + 2.0) / (x * (x * x + 3.0))


def reciprocal_mills(x):
    """``phi(x)/Q(x)``, the hazard rate of the standard normal.

    Defined for every real x (it tends to 0 as x -> -inf); the rational
    bounds ``x < V(x) < x + 1/x`` hold for x > 0.
    """
    return _scalar_or_array(_reciprocal_mills_values(x), x)


def gumbel_cdf(x):
    """Gumbel distribution function ``exp(-exp(-x))``."""
    with np.errstate(over="ignore"):
        out = np.exp(-np.exp(-np.asarray(x, dtype=float)))
    return _scalar_or_array(out, x)


def gumbel_pdf(x):
    xa = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        e = np.exp(-xa)
        out = np.where(np.isinf(e), 0.0, e * np.exp(-e))
    return _scalar_or_array(out, x)


def _polish_ulps(y, residual):
    """Among y and its two neighbouring doubles pick the smallest |residual|."""
    best, best_r = y, abs(residual(y))
    for cand in (math.nextafter(y, -math.inf), math.nextafter(y, math.inf)):
        r = abs(residual(cand))
        if r < best_r:
            best, best_r = cand, r
    return best


def lambert_w0(t: float) -> float:
    """Principal branch of Lambert W on ``t >= 0``.

    Halley iteration from the asymptotic seed; arguments with ``log t > 700``
    are routed through :func:`lambert_w_log_arg`.
    """
    t = float(t)
    if t < 0 or math.isnan(t):
        raise DomainError(f"lambert_w0 needs t >= 0, got {t!r}")
    if t == 0.0:
        return 0.0
    log_t = math.log(t)
    if log_t > 700.0:
        return lambert_w_log_arg(log_t)
    w = math.log1p(t) if log_t <= 1.0 else w_asymptotic(log_t, 3)
    for _ in range(_NEWTON_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - t
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break
    else:
        raise ConvergenceError(f"lambert_w0({t!r}) did not converge")
    return _polish_ulps(w, lambda y: y * math.exp(y) - t)


def lambert_w_log_arg(big_l: float) -> float:
    """Solve ``y + log y = L`` for ``L >= 1``; equals ``W(exp(L))``."""
    big_l = float(big_l)
    if not big_l >= 1.0:
        raise DomainError(f"lambert_w_log_arg needs L >= 1, got {big_l!r}")
    if big_l == 1.0:
        return 1.0
    y = w_asymptotic(big_l, 3)
    if y <= 0:
        y = 1.0
    for _ in range(_NEWTON_MAX_ITER):
        g = y + math.log(y) - big_l
        gp = 1.0 + 1.0 / y
        gpp = -1.0 / (y * y)
        dy = g / (gp - 0.5 * g * gpp / gp)
        y_new = y - dy
        if y_new <= 0:
            y_new = 0.5 * y
        y, dy = y_new, y_new - y
        if abs(dy) <= 1e-15 * (1.0 + y):
            break
    else:
        raise ConvergenceError(f"lambert_w_log_arg({big_l!r}) did not converge")
    return _polish_ulps(y, lambda v: math.fsum((v, math.log(v), -big_l)))


def w_asymptotic(big_l: float, order: int = 3) -> float:
    """Truncated large-argument series of ``W(t)`` in ``L = log t``.

    order 2: ``L - log L``; order 3 adds ``log L / L``; order 4 adds
    ``log L (log L - 2) / (2 L^2)``.
    """
    if order not in (2, 3, 4):
        raise DomainError(f"expansion order must be 2, 3 or 4, got {order!r}")
    if not big_l > 1.0:
        raise DomainError(f"w_asymptotic needs L > 1, got {big_l!r}")
    ll = math.log(big_l)
    w = big_l - ll
    if order >= 3:
        w += ll / big_l
    if order >= 4:
        w += ll * (ll - 2.0) / (2.0 * big_l * big_l)
    return w


def u_d_asymptotic(big_l: float, d1: float) -> float:
    """``L - log L + (log L - d1)/L``: the generalised Lambert expansion."""
    if not big_l > 1.0:
        raise DomainError(f"u_d_asymptotic needs L > 1, got {big_l!r}")
    ll = math.log(big_l)
    return big_l - ll + (ll - d1) / big_l
