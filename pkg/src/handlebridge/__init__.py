"""Combinatorial calculus for bridge positions of knotted trivalent graphs."""

from .words import (
    Event,
    Kind,
    SlicedWord,
    classify,
    format_word,
    invariants,
    parse_word,
    reconstruct_graph,
    validate,
)

__all__ = [
    "Event",
    "Kind",
    "SlicedWord",
    "classify",
    "format_word",
    "invariants",
    "parse_word",
    "reconstruct_graph",
    "validate",
]
