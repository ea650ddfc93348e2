"""Exception hierarchy shared by every stage of the toolchain."""

from __future__ import annotations


class AgapiaError(Exception):
    """Base class; ``pos`` is an optional (line, col) pair for diagnostics."""

    def __init__(self, message: str, pos: tuple[int, int] | None = None):
        super().__init__(message)
        self.message = message
        self.pos = pos

    def __str__(self) -> str:
        if self.pos is None:
            return self.message
        return f"{self.pos[0]}:{self.pos[1]}: {self.message}"


class LexError(AgapiaError):
    pass


class ParseError(AgapiaError):
    pass


class WorldError(AgapiaError):
    """Spatial and temporal data mixed where one world is required."""


class AgapiaTypeError(AgapiaError):
    pass


class ScopeError(AgapiaError):
    pass


class InterfaceError(AgapiaError):
    """Runtime data does not fit a declared interface."""


class CompositionError(AgapiaError):
    """Two scenarios (or run results) cannot be glued along a seam."""


class IndexRangeError(AgapiaError):
    pass


class StructureError(AgapiaError):
    pass


class ArithmeticFault(AgapiaError):
    pass


class DivergenceError(AgapiaError):
    pass


class GenerationError(AgapiaError):
    pass
