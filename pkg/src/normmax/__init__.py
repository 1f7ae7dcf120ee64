"""Norming constants for the maximum of n iid standard normals.

Locations and scales (exact, Hall's, and closed-form approximants), the
sup-norm distance to the Gumbel law, numerical certificates for the
associated bounds, calibration of the ``B_n(p, q)`` family, and an exact
Monte Carlo sampler.
"""
from .errors import (
    ConvergenceError,
    DegenerateScaleError,
    DomainError,
    InvalidPairError,
    NoRootError,
    QuadratureError,
)
from .norming import (
    AuxiliaryKind,
    BGeneral,
    LogSize,
    Method,
    NormingPair,
    exact_b,
    hall_b_star,
    location,
    norming_pair,
)
from .distance import DistanceReport, sup_distance

__all__ = [
    "AuxiliaryKind",
    "BGeneral",
    "ConvergenceError",
    "DegenerateScaleError",
    "DistanceReport",
    "DomainError",
    "InvalidPairError",
    "LogSize",
    "Method",
    "NoRootError",
    "NormingPair",
    "QuadratureError",
    "exact_b",
    "hall_b_star",
    "location",
    "norming_pair",
    "sup_distance",
]
