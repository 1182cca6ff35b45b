"""
Error hierarchy for semiinv.

Every domain failure raised by the library derives from SemiInvariantError and
carries a short ``kind`` (the class name) plus an optional ``witness`` mapping
that the command line prints alongside the message.
"""

from typing import Dict, Mapping, Optional


class SemiInvariantError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message: str, witness: Optional[Mapping[str, str]] = None):
        super().__init__(message)
        self.message = message
        self.witness: Dict[str, str] = dict(witness or {})

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, object]:
        return {"error": self.kind, "message": self.message, "witness": self.witness}


class MultiBlockUnsupported(SemiInvariantError):
    """A single-block operation received variables of another block."""


class SlotOutOfRange(SemiInvariantError):
    """A slot index exceeds the bound an operator was built for."""


class NotHomogeneous(SemiInvariantError):
    pass


class NotIsobaric(SemiInvariantError):
    pass


class NilpotencyViolated(SemiInvariantError):
    """D^m p is not zero for the requested m."""


class InverseFailed(SemiInvariantError):
    """A computed right inverse of D does not satisfy D q = p."""


class VariableOutOfSpec(SemiInvariantError):
    pass


class NotSemiInvariant(SemiInvariantError):
    pass


class GenericModeUnsupported(SemiInvariantError):
    pass


class OddUnsupported(SemiInvariantError):
    pass


class BlockTooSmall(SemiInvariantError):
    pass


class NotUInvariant(SemiInvariantError):
    pass


class NegativeOrder(SemiInvariantError):
    pass


class NotDivisible(SemiInvariantError):
    pass


class NoSolution(SemiInvariantError):
    """The membership system has no solution for the given denominators."""


class PolyParseError(ValueError):
    """Malformed polynomial text or JSON."""


class JordanSpecError(ValueError):
    """Malformed Jordan specification string."""
