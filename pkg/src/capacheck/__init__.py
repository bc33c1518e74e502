"""Capability of finite class-two groups of odd prime exponent.

A group on ``n`` generators is encoded by a subspace ``X`` of ``V`` (one
coordinate per basic commutator ``[x_j, x_i]``); the group is capable exactly
when ``X`` equals the subspace ``Z_X`` computed by :func:`is_capable`.
"""

from .engine import (
    CapabilityReport,
    ReducedInstance,
    central_coefficient_space,
    compute_Y,
    compute_Z,
    hn_bound,
    hn_bound_check,
    is_capable,
    reduce_special,
)
from .enumeration import CensusReport, census, count_subspaces, dimY_profile, iterate_subspaces
from .linalg import EvenPrimeError, FieldError, Subspace
from .phi import PhiStructure, build
from .presentations import (
    Presentation,
    build_extraspecial,
    coordinate_subspace,
    coproduct,
    extend_with_central,
    parse,
    to_subspace,
)

__version__ = "0.1.0"

__all__ = [
    "CapabilityReport",
    "CensusReport",
    "EvenPrimeError",
    "FieldError",
    "PhiStructure",
    "Presentation",
    "ReducedInstance",
    "Subspace",
    "build",
    "build_extraspecial",
    "census",
    "central_coefficient_space",
    "compute_Y",
    "compute_Z",
    "coordinate_subspace",
    "coproduct",
    "count_subspaces",
    "dimY_profile",
    "extend_with_central",
    "hn_bound",
    "hn_bound_check",
    "is_capable",
    "iterate_subspaces",
    "parse",
    "reduce_special",
    "to_subspace",
]
