"""Exception types shared by the library and mapped to CLI exit codes."""


class DomainError(ValueError):
    """Input outside the range where a quantity is defined."""


class NumericFailure(ArithmeticError):
    """A numerical procedure (root bracketing, linear solve, check) failed."""
