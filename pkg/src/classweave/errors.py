"""Exception types shared across the toolkit."""


class ClassweaveError(Exception):
    """Base class for all toolkit errors."""


class NotationParseError(ClassweaveError, ValueError):
    """Raised when a classmark string cannot be parsed.

    Carries the zero-based offset of the offending character so callers
    can point at the exact spot in diagnostics.
    """

    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.message = message
        self.text = text
        self.offset = offset


class NotFoundError(ClassweaveError, LookupError):
    """A notation, facet, scheme or document key does not resolve."""


class StructuralError(ClassweaveError):
    """The scheme violates a structural invariant (cycle, dangling link)."""


class SynthesisError(ClassweaveError, ValueError):
    """Number building failed: out-of-span source, marker mismatch, etc."""


class SchemeLoadError(ClassweaveError):
    """Fatal problem while loading a scheme file (e.g. duplicate keys)."""
