"""Exception types shared across the library."""


class TwofoldError(Exception):
    """Base class for numerical failures raised by this library."""


class NoReturnError(TwofoldError):
    """No switching-plane crossing was found within the search window."""


class TangentialGrazeError(TwofoldError):
    """A crossing is tangential: the transversality margin is below tolerance."""


class GrazingCrossingError(TwofoldError):
    """Saltation divisor (Lie derivative) is below tolerance at a crossing."""


class NoConvergenceError(TwofoldError):
    """An iterative solver exhausted its iteration budget."""


class NotACycleError(TwofoldError):
    """A candidate fixed point failed the symmetric-cycle invariants."""


class DivergenceError(TwofoldError):
    """Return-map iteration left the admissible branch domain."""


class EmptyBandError(TwofoldError):
    """No stable H-interval exists for the requested C."""
