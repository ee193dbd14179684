"""Exception hierarchy shared by every pentalab module."""


class PentalabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(PentalabError, ValueError):
    pass


class Singular(PentalabError, ZeroDivisionError):
    pass


class ModelMismatch(PentalabError, TypeError):
    pass


class InvalidModel(PentalabError, ValueError):
    """Model parameters or element coordinates violate a model invariant."""


class DomainError(PentalabError, ArithmeticError):
    """A map was evaluated on its bad (Zariski-closed) locus.

    Verification suites treat this as a rejected sample, not a failure.
    """


class NotFactorizable(DomainError):
    """The element lies outside the factorizable locus."""


class ThetaNotUnipotent(PentalabError, ValueError):
    """An operation needs a conjugating element whose square is the identity."""


class SamplingExhausted(PentalabError, RuntimeError):
    pass


class RejectionRateExceeded(SamplingExhausted):
    """More than half of the drawn samples hit a bad locus."""


class UnsupportedType(PentalabError, ValueError):
    pass


class IndexOutOfRange(PentalabError, IndexError):
    pass
