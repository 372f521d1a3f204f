"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the operation's domain."""


class DivisibilityError(ArithmeticError):
    """An exact division left a nonzero remainder."""


class CertificationError(ArithmeticError):
    """A claimed certificate (isolating interval, enclosure) does not hold."""


class NonhyperbolicParameterError(ArithmeticError):
    """The parameter point sits on a bifurcation: a multiple root or |multiplier| = 1."""


class DegenerateProbeError(ArithmeticError):
    """A probe annihilates a border-polynomial factor, so counts are not locally constant."""


class DegeneracyError(ArithmeticError):
    """A construction hit a degenerate case (zero divisor, vanishing resultant)."""


class InsufficientDataError(ValueError):
    """A trajectory window is too short for the requested analysis."""
