"""Possibility semantics on finite structures."""

from .errors import CapExceeded, InputError, PosskitError
from .poset import Poset
from .verdict import Check

__all__ = ["CapExceeded", "Check", "InputError", "Poset", "PosskitError"]
__version__ = "0.1.0"
