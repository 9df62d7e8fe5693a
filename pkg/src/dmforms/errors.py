"""Exception hierarchy shared by every module of the package."""


class DrinfeldError(Exception):
    """Base class for all errors raised by :mod:`dmforms`."""


class DivisionByZero(DrinfeldError, ZeroDivisionError):
    """Inversion of zero in F_q."""


class InexactDivision(DrinfeldError, ArithmeticError):
    """An exact division left a nonzero remainder.

    Inside the library this always signals a violated integrality claim,
    i.e. a wrong upstream expansion.
    """


class NotInvertible(DrinfeldError, ArithmeticError):
    """A series whose leading coefficient is not a unit was inverted."""


class VariableMismatch(DrinfeldError, ValueError):
    """Series in different uniformizer variables were combined."""


class IllegalSubstitution(DrinfeldError, ValueError):
    """Substitution of a series with non-positive valuation."""


class DomainError(DrinfeldError, ValueError):
    """An argument lies outside the domain of an operation."""


class TypeWeightMismatch(DomainError):
    """The pair (k, l) violates k = 2l (mod q-1)."""


class AllZeroAtPrecision(DrinfeldError):
    """A series vanishes identically at the working precision."""


class WindowEmpty(DrinfeldError):
    """A verification window contains no checkable exponent."""


class InternalError(DrinfeldError, AssertionError):
    """A theorem-backed invariant failed; this indicates a library bug."""
