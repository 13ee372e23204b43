"""Exception hierarchy shared by every module."""


class SudokuSymError(Exception):
    pass


class NotABijection(SudokuSymError, ValueError):
    pass


class NotBandStructured(SudokuSymError, ValueError):
    pass


class BoxMismatch(SudokuSymError, ValueError):
    pass


class UnsupportedBox(SudokuSymError, ValueError):
    pass


class Prop1Violation(SudokuSymError, AssertionError):
    """Row and column permutations failed to commute; indicates a bug."""


class BadLength(SudokuSymError, ValueError):
    pass


class BadCharacter(SudokuSymError, ValueError):
    pass


class InvalidGrid(SudokuSymError, ValueError):
    pass


class IncompleteGrid(SudokuSymError, ValueError):
    pass


class ExprSyntaxError(SudokuSymError, ValueError):
    """Raised by the symmetry expression parser; carries the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
