"""Exact-arithmetic machinery for a saturated-under-constraints HI space.

Schreier families, the norming set W, finite-scale constructions and a
certified norm-bounding engine, all over :class:`fractions.Fraction`.
"""
from fractions import Fraction

from .errors import (DomainError, HinormError, IntegrityError,
                     MalformedBlockSequence, ResourceLimitError, Violation)

__all__ = ["Fraction", "DomainError", "HinormError", "IntegrityError",
           "MalformedBlockSequence", "ResourceLimitError", "Violation"]
__version__ = "0.1.0"
