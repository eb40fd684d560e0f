"""Named example words used in docs, tests and the CLI."""

from __future__ import annotations

from .words import SlicedWord, parse_word

_TEXT = {
    "unknot": "cup@1 ; cap@1",
    "unknot2": "cup@1 ; cup@3 ; cap@2 ; cap@1",
    "theta": "cup@1 ; y@1 ; l@1 ; cap@1",
    "handcuff": "cup@1 ; y@1 ; y@3 ; cap@1 ; cap@1",
    "trefoil": "cup@1 ; cup@3 ; x+@2 ; x+@2 ; x+@2 ; cap@1 ; cap@1",
    "knotted_theta": "cup@1 ; y@1 ; x+@2 ; x+@2 ; x+@2 ; l@1 ; cap@1",
    # one-crossing unknot: the trefoil plat with two crossings removed
    "kinked_unknot": "cup@1 ; cup@3 ; x+@2 ; cap@1 ; cap@1",
    # positive three-crossing braids whose triangle face admits a strand slide
    "triangle": "cup@1 ; cup@3 ; x+@2 ; x+@1 ; x+@2 ; cap@1 ; cap@1",
    "triangle2": "cup@1 ; cup@3 ; x+@1 ; x+@2 ; x+@1 ; cap@1 ; cap@1",
    # theta graphs whose two crossings sit next to a vertex
    "theta_clasp": "cup@1 ; y@1 ; x-@1 ; x-@2 ; l@2 ; cap@1",
    "theta_clasp2": "cup@1 ; y@1 ; x-@2 ; x-@1 ; l@1 ; cap@1",
}

NAMED: dict[str, SlicedWord] = {k: parse_word(v) for k, v in _TEXT.items()}


def named(name: str) -> SlicedWord:
    return NAMED[name]
