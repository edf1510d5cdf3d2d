"""Half-line Schrodinger evolution with an inverse-square potential,
spectral analysis through the Hankel transform, numerical certification
of observability and unique continuation inequalities with their
explicit constants, sharpness (counterexample) families, and impulse
control synthesis by the penalized dual method.
"""

from .grid import (
    GridFunction,
    InequalityReport,
    IntervalSet,
    RadialGrid,
    make_grid,
)

__version__ = "0.1.0"

__all__ = [
    "GridFunction",
    "InequalityReport",
    "IntervalSet",
    "RadialGrid",
    "make_grid",
    "__version__",
]
