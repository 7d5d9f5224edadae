"""Analytico-synthetic classification toolkit.

Notation parsing and canonicalization, scheme hierarchies, faceted
synthesis, word indexes, subject retrieval over classified documents,
concept-scheme interchange and a CLI/HTTP service on top.
"""

from .errors import (ClassweaveError, NotationParseError, NotFoundError,
                     SchemeLoadError, StructuralError, SynthesisError)
from .kos import ClassRecord, Scheme
from .notation import Compound, NotationParser, Relation, Simple, Span, parse

__version__ = "1.0.0"

__all__ = [
    "ClassweaveError", "NotationParseError", "NotFoundError",
    "SchemeLoadError", "StructuralError", "SynthesisError",
    "ClassRecord", "Scheme",
    "Compound", "NotationParser", "Relation", "Simple", "Span", "parse",
    "__version__",
]
