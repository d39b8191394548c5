"""Exception hierarchy shared by every module."""


class LeibnizError(Exception):
    """Base class for library errors."""


class ParseError(LeibnizError, ValueError):
    """Malformed scalar, matrix or JSON document."""


class ShapeError(LeibnizError, ValueError):
    """Dimensions or fields of the operands do not fit together."""


class NotLeibnizError(LeibnizError, ValueError):
    """A bracket fails the Leibniz identity."""

    def __init__(self, witness):
        super().__init__(f"Leibniz identity fails at basis triple {witness.indices}")
        self.witness = witness


class AxiomError(LeibnizError, ValueError):
    """Input violates a structural precondition (non-ideal, non-module, ...)."""


class UnsupportedEnumeration(LeibnizError):
    """Exhaustive search requested over a field where it is undefined."""


class BudgetExceeded(LeibnizError):
    """A search space is larger than the configured budget; answer undecided."""
