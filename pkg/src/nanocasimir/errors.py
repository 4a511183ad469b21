"""Exception types raised by the package."""


class CasimirError(ValueError):
    """Base class for all domain errors raised by :mod:`nanocasimir`."""


class DomainError(CasimirError):
    """An argument lies outside the domain of a model (poles, negative radii, ...)."""


class MaterialKindError(CasimirError):
    """The operation is not defined for this kind of material."""


class BreakdownError(CasimirError):
    """A depolarization factor left (0, 1): the dipolar model has no real mode there."""

    def __init__(self, message, factors=None):
        super().__init__(message)
        self.factors = factors


class ConvergenceError(CasimirError):
    """Adaptive quadrature exhausted its subdivision budget above tolerance."""
