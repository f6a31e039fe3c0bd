"""Builders for coloured e-star systems. Each returns a ConstructionResult
whose decomposition and colouring were re-verified before returning."""

from __future__ import annotations

from ._common import Claims, ConstructionResult
from .base import build_2chromatic_estar, build_equitable_2chromatic_3star
from .extend import extend_kchromatic_3star, extend_kchromatic_estar
from .lift import lift_3star_chromatic, lift_estar_chromatic
from .unique import (
    build_unique_2chromatic_estar,
    extend_unique_2chromatic,
    extend_unique_kchromatic,
    lift_unique_to_strong_equitable_k,
    make_unique_kchromatic,
)

__all__ = [
    "Claims",
    "ConstructionResult",
    "build_2chromatic_estar",
    "build_equitable_2chromatic_3star",
    "build_unique_2chromatic_estar",
    "extend_kchromatic_3star",
    "extend_kchromatic_estar",
    "extend_unique_2chromatic",
    "extend_unique_kchromatic",
    "lift_3star_chromatic",
    "lift_estar_chromatic",
    "lift_unique_to_strong_equitable_k",
    "make_unique_kchromatic",
]
