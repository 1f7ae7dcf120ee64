"""Norming constants (location, scale) for the maximum of n standard normals.

Sample sizes travel as :class:`LogSize` so that every formula can be
evaluated from ``log n`` alone; ``n**2/(2*pi)`` is never formed.
"""
from __future__ import annotations

import decimal
import enum
import math
import re
from dataclasses import dataclass
from typing import Union

from . import specfn
from .errors import DegenerateScaleError, DomainError

LOG_2PI = specfn.LOG_2PI
LOG_4PI = math.log(4.0 * math.pi)


@dataclass(frozen=True)
class LogSize:
    """Sample size ``n`` stored together with ``log n``.

    ``n`` is ``inf`` once it exceeds the double range; ``log_n`` is then the
    only meaningful field.  Non-integer sizes are allowed.
    """

    n: float
    log_n: float
    label: str = ""

    def __post_init__(self):
        if not self.log_n >= 0.0 or math.isinf(self.log_n):
            raise DomainError(f"sample size must be >= 1, got log n = {self.log_n!r}")
        if not self.label:
            object.__setattr__(self, "label", _default_label(self.n, self.log_n))

    @classmethod
    def of(cls, n: float) -> "LogSize":
        n = float(n)
        if not n >= 1.0 or math.isinf(n):
            raise DomainError(f"sample size must be finite and >= 1, got {n!r}")
        return cls(n, math.log(n))

    @classmethod
    def from_log(cls, log_n: float) -> "LogSize":
        log_n = float(log_n)
        n = math.exp(log_n) if log_n < 709.0 else math.inf
        return cls(n, log_n)

    @classmethod
    def pow10(cls, k: float) -> "LogSize":
        """``10**k`` built from ``k * log 10`` (exact label ``10^k``)."""
        n = 10.0 ** k if k <= 308 else math.inf
        label = f"10^{_fmt_exponent(k)}"
        return cls(n, _log_pow10(k), label)

    @classmethod
    def parse(cls, text: str) -> "LogSize":
        """Accept ``"1000"``, ``"2.5"``, ``"1e30"`` or ``"10^100"``."""
        s = text.strip()
        m = re.fullmatch(r"10\^([+-]?\d+(?:\.\d*)?)", s) or re.fullmatch(
            r"1[eE]\+?(\d+(?:\.\d*)?)", s
        )
        if m:
            return cls.pow10(float(m.group(1)))
        try:
            value = float(s)
        except ValueError:
            raise DomainError(f"cannot parse sample size {text!r}") from None
        size = cls.of(value)
        return cls(size.n, size.log_n, s)

    @property
    def log_log_n(self) -> float:
        return math.log(self.log_n)


def _log_pow10(k: float) -> float:
    """Correctly rounded ``k * log(10)``."""
    with decimal.localcontext() as ctx:
        ctx.prec = 40
        return float(decimal.Decimal(repr(float(k))) * decimal.Decimal(10).ln())


def _fmt_exponent(k: float) -> str:
    return str(int(k)) if float(k).is_integer() else repr(float(k))


def _default_label(n: float, log_n: float) -> str:
    if math.isinf(n):
        return f"exp({log_n!r})"
    if n.is_integer() and n < 1e16:
        return str(int(n))
    return repr(n)


def as_logsize(n) -> LogSize:
    if isinstance(n, LogSize):
        return n
    if isinstance(n, str):
        return LogSize.parse(n)
    return LogSize.of(n)


class AuxiliaryKind(enum.Enum):
    """Auxiliary function generating the scale ``a = A(b)``."""

    CANONICAL = "ac"  # Mills ratio Q(b)/phi(b)
    FISHER_TIPPETT = "af"  # b/(1+b^2)
    HALL = "ah"  # 1/b


class Method(enum.Enum):
    EXACT = "exact"
    HALL_STAR = "hallstar"
    BETA_STAR = "betastar"
    BAR_BETA_STAR = "barbetastar"
    TILDE_BETA_STAR = "tildebetastar"
    BAR_BETA = "barbeta"
    TILDE_BETA = "tildebeta"
    BETA_FINAL = "beta"


@dataclass(frozen=True)
class BGeneral:
    """Two-parameter location family; ``BGeneral(0.5, -log 2pi)`` is the final beta."""

    p: float
    q: float

    @property
    def value(self) -> str:
        return f"bgen({self.p!r};{self.q!r})"


ApproxMethod = Union[Method, BGeneral]


def parse_method(text: str) -> ApproxMethod:
    s = text.strip().lower()
    m = re.fullmatch(r"bgen\(\s*([^;,]+)\s*[;,:]\s*([^;,)]+)\s*\)", s)
    if m:
        return BGeneral(_parse_real(m.group(1)), _parse_real(m.group(2)))
    try:
        return Method(s)
    except ValueError:
        raise DomainError(f"unknown method {text!r}") from None


def parse_aux(text: str) -> AuxiliaryKind:
    try:
        return AuxiliaryKind(text.strip().lower())
    except ValueError:
        raise DomainError(f"unknown auxiliary function {text!r}") from None


def _parse_real(s: str) -> float:
    s = s.strip()
    if s in ("-log2pi", "-ln2pi"):
        return -LOG_2PI
    return float(s)


@dataclass(frozen=True)
class NormingPair:
    """Location ``b`` and scale ``a > 0``; method/aux are ``None`` for ad hoc pairs."""

    location: float
    scale: float
    method: ApproxMethod | None = None
    aux: AuxiliaryKind | None = None

    def __post_init__(self):
        if not self.scale > 0 or math.isinf(self.scale):
            raise DegenerateScaleError(f"norming scale must be positive, got {self.scale!r}")
        if not math.isfinite(self.location):
            raise DomainError(f"norming location must be finite, got {self.location!r}")

    @property
    def label(self) -> str:
        m = self.method.value if self.method is not None else "custom"
        a = self.aux.value if self.aux is not None else "custom"
        return f"{m}:{a}"


def exact_b(n) -> float:
    """``b_n`` with ``Q(b_n) = 1/n`` (the ``1 - 1/n`` normal quantile)."""
    n = as_logsize(n)
    if n.log_n < math.log(2.0) - 1e-15:
        raise DomainError(f"exact_b needs n >= 2, got n = {n.label}")
    return specfn.std_normal_quantile_upper(specfn.TailProbability.from_log(-n.log_n))


def hall_b_star(n) -> float:
    """Root ``b* > 0`` of ``phi(b)/b = 1/n``, i.e. ``sqrt(W(n^2/(2 pi)))``."""
    n = as_logsize(n)
    if n.log_n < math.log(3.0) - 1e-15:
        raise DomainError(f"hall_b_star needs n >= 3, got n = {n.label}")
    big_l = 2.0 * n.log_n - LOG_2PI
    if big_l > 700.0:
        w = specfn.lambert_w_log_arg(big_l)
    else:
        w = specfn.lambert_w0(math.exp(big_l))
    return math.sqrt(w)


def auxiliary_scale(kind: AuxiliaryKind, b: float) -> float:
    if kind is AuxiliaryKind.CANONICAL:
        if b < 0:
            raise DegenerateScaleError(f"canonical scale needs b >= 0, got {b!r}")
        return specfn.mills_ratio(b)
    if not b > 0:
        raise DegenerateScaleError(f"{kind.name} scale needs b > 0, got {b!r}")
    if kind is AuxiliaryKind.FISHER_TIPPETT:
        return b / (1.0 + b * b)
    return 1.0 / b


def _domain(method, n: LogSize, why: str) -> DomainError:
    name = method.value if hasattr(method, "value") else str(method)
    return DomainError(f"{name} undefined at n = {n.label}: {why}")


def _sqrt_checked(radicand: float, method, n: LogSize) -> float:
    if not radicand >= 0:
        raise _domain(method, n, f"negative radicand {radicand!r}")
    return math.sqrt(radicand)


def _lambert_type(method, n: LogSize, numerator: float, denominator: float) -> float:
    """``sqrt(Lt - log Lt + numerator/denominator)`` with ``Lt = log(n^2/(2 pi))``."""
    lt = 2.0 * n.log_n - LOG_2PI
    if not lt > 0:
        raise _domain(method, n, "log(n^2/(2 pi)) <= 0")
    if denominator == 0:
        raise _domain(method, n, "zero denominator")
    return _sqrt_checked(lt - math.log(lt) + numerator / denominator, method, n)


def approx_location(method: ApproxMethod, n) -> float:
    """Closed-form location constants (no iteration)."""
    n = as_logsize(n)
    if isinstance(method, BGeneral):
        l2 = 2.0 * n.log_n
        if not (l2 + method.p > 0 and l2 + method.q > 0):
            raise _domain(method, n, "needs log(n^2) + p > 0 and log(n^2) + q > 0")
        return _lambert_type(method, n, math.log(l2 + method.p) - 2.0, l2 + method.q)
    if method is Method.BETA_FINAL:
        return approx_location(BGeneral(0.5, -LOG_2PI), n)
    if method in (Method.BAR_BETA, Method.BAR_BETA_STAR):
        lt = 2.0 * n.log_n - LOG_2PI
        if not lt > 0:
            raise _domain(method, n, "log(n^2/(2 pi)) <= 0")
        d1 = 2.0 if method is Method.BAR_BETA else 0.0
        return _lambert_type(method, n, math.log(lt) - d1, lt)
    if method in (Method.BETA_STAR, Method.TILDE_BETA_STAR, Method.TILDE_BETA):
        if not n.log_n > 0:
            raise _domain(method, n, "log n <= 0")
        s = math.sqrt(2.0 * n.log_n)
        ell = math.log(4.0 * math.pi * n.log_n)
        loc = s - ell / (2.0 * s)
        if method is Method.TILDE_BETA_STAR:
            loc -= (ell * ell - 4.0 * ell) / (8.0 * s**3)
        elif method is Method.TILDE_BETA:
            loc -= (ell * ell - 4.0 * ell + 8.0) / (8.0 * s**3)
        return loc
    raise DomainError(f"{method.value} has no closed form; use location()")


def location(method: ApproxMethod, n) -> float:
    """Location for any method, including the exact and Hall (implicit) ones."""
    if method is Method.EXACT:
        return exact_b(n)
    if method is Method.HALL_STAR:
        return hall_b_star(n)
    return approx_location(method, n)


def norming_pair(method: ApproxMethod, aux: AuxiliaryKind, n) -> NormingPair:
    n = as_logsize(n)
    b = location(method, n)
    try:
        a = auxiliary_scale(aux, b)
    except DegenerateScaleError as exc:
        raise DegenerateScaleError(f"{method.value}:{aux.value} at n = {n.label}: {exc}") from None
    return NormingPair(b, a, method, aux)
