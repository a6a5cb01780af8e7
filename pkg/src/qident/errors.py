"""Exception hierarchy shared by every layer of the package."""


class QIdentError(Exception):
    """Base class for all package errors."""


class DomainError(QIdentError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """A q-gamma pole (or a zero of its reciprocal) was hit."""

    def __init__(self, message, argument=None):
        super().__init__(message)
        self.argument = argument


class NonConvergence(QIdentError, ArithmeticError):
    """The term cap was reached before the tail bound met the tolerance."""

    def __init__(self, message, terms_used=0):
        super().__init__(message)
        self.terms_used = terms_used


class InvalidParams(QIdentError, ValueError):
    """Template parameters violate the identity's convergence condition."""


class ParseError(QIdentError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
