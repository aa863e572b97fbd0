"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class DefaultLogicError(Exception):
    """Base class for all errors raised by deflogic."""


class ParseError(DefaultLogicError):
    """Syntax error in a formula, theory or QBF text.

    ``line`` and ``column`` are 1-based.
    """

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class InconsistentBackground(DefaultLogicError):
    pass


class UndeclaredAtom(DefaultLogicError):
    pass


class RenamingCollision(DefaultLogicError):
    pass


class MalformedProcess(DefaultLogicError):
    pass


class ContractViolation(DefaultLogicError):
    pass


class EnumerationBound(DefaultLogicError):
    pass


class AlphabetError(DefaultLogicError):
    pass


class UnsupportedConstruction(DefaultLogicError):
    pass
