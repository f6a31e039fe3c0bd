"""Construct and certify coloured e-star decompositions of complete graphs."""

from __future__ import annotations

from .core import (
    Colouring,
    ColouringReport,
    DecompositionReport,
    Star,
    StarSystem,
    check_colouring,
    disjoint_copy,
    is_admissible,
    relabel,
    validate_decomposition,
)

__all__ = [
    "Colouring",
    "ColouringReport",
    "DecompositionReport",
    "Star",
    "StarSystem",
    "check_colouring",
    "disjoint_copy",
    "is_admissible",
    "relabel",
    "validate_decomposition",
]

__version__ = "0.1.0"
