"""Exact search: weak colourings, chromatic numbers, resolutions."""

from ._jit import jit_available
from .colouring import (
    INDETERMINATE,
    SAT,
    TIMEOUT,
    UNSAT,
    ChromaticOutcome,
    SearchOptions,
    SearchOutcome,
    chromatic_number,
    search_weak_colouring,
)
from .resolution import NONE, ResolutionOutcome, find_resolution

__all__ = [
    "INDETERMINATE", "NONE", "SAT", "TIMEOUT", "UNSAT",
    "ChromaticOutcome", "ResolutionOutcome", "SearchOptions", "SearchOutcome",
    "chromatic_number", "find_resolution", "jit_available", "search_weak_colouring",
]
