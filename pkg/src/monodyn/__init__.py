"""Exact real-algebraic analysis and simulation of two cubic monopoly maps.

Model 1 is F(x) = x + f(e - x^3); Model 2 is F(x) = x + K(a - 2bx + 3cx^2 - 4dx^3).
The package counts stable equilibria through semi-algebraic systems,
enumerates and classifies n-cycles with certified intervals, brackets the
parameter values where cycle counts change, certifies Li-Yorke chaos, and
cross-checks all of it against float simulations.

Hot polynomial and iteration kernels come from a compiled extension when
available; ``monodyn.kernels.BACKEND`` names the one in use.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CertificationError,
    DegeneracyError,
    DegenerateProbeError,
    DivisibilityError,
    DomainError,
    InsufficientDataError,
    NonhyperbolicParameterError,
)
from .models import build_map, model1, model2  # noqa: E402
from .orbits import enumerate_cycles, find_thresholds  # noqa: E402

__all__ = [
    "__version__",
    "build_map",
    "model1",
    "model2",
    "enumerate_cycles",
    "find_thresholds",
    "CertificationError",
    "DegeneracyError",
    "DegenerateProbeError",
    "DivisibilityError",
    "DomainError",
    "InsufficientDataError",
    "NonhyperbolicParameterError",
]
