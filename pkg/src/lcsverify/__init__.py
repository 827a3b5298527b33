"""Exact finite-level checks for lower central series of free-by-cyclic groups."""
from .errors import InputError, PrecisionError, ResourceLimitError
from .fbc import FbcElement, FbcGroup, FreeAutomorphism, paper_group
from .words import Alphabet, Word, parse_word

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "FbcElement",
    "FbcGroup",
    "FreeAutomorphism",
    "InputError",
    "PrecisionError",
    "ResourceLimitError",
    "Word",
    "paper_group",
    "parse_word",
]
