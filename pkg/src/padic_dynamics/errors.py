"""Exception hierarchy shared by all modules."""


class PadicDynamicsError(Exception):
    """Base class for every error raised by this package."""


class NonUnitDenominator(PadicDynamicsError, ValueError):
    pass


class NotInvertible(PadicDynamicsError, ValueError):
    pass


class ParseError(PadicDynamicsError, ValueError):
    """Malformed map text; carries the offending position and what was expected."""

    def __init__(self, message, position=None, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = message
        if position is not None:
            detail += f" at position {position}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


class ZeroDenominator(PadicDynamicsError, ValueError):
    pass


class NotNormalizable(PadicDynamicsError, ValueError):
    pass


class IndeterminatePoint(PadicDynamicsError, ArithmeticError):
    pass


class PoleAtPoint(PadicDynamicsError, ArithmeticError):
    pass


class NoValidBasePoint(PadicDynamicsError, RuntimeError):
    pass


class WrongForm(PadicDynamicsError, ValueError):
    """The map is not in the standardized shape phi(0) = inf, phi(inf) = 1, a_d = b_d = 1."""


class NotCertifiedLipschitz(PadicDynamicsError, ValueError):
    pass


class BadReduction(PadicDynamicsError, ValueError):
    pass


class DegreeTooSmall(PadicDynamicsError, ValueError):
    pass


class PrecisionLoss(PadicDynamicsError, ArithmeticError):
    """A residue computation ran out of p-adic precision."""


class InvariantViolation(PadicDynamicsError, RuntimeError):
    """An internal consistency check failed; indicates a bug or a misused certificate."""


class RepresentativeDisagreement(InvariantViolation):
    pass


class InsufficientValuation(InvariantViolation):
    pass


class ClassificationMismatch(InvariantViolation):
    pass
