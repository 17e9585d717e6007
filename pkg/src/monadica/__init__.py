"""Finite semantics, translations and countermodel search for monadic and tense S4-type logics."""

from .syntax import Formula, Logic, parse, pretty
from .frames import Frame, enumerate_frames, validate
from .semantics import Refuted, Valid, satisfies, valid_up_to

__all__ = [
    "Formula", "Logic", "parse", "pretty", "Frame", "enumerate_frames",
    "validate", "Refuted", "Valid", "satisfies", "valid_up_to",
]
__version__ = "0.1.0"
