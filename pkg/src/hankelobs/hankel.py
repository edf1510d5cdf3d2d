"""Dense discrete Hankel transform operators.

The transform with kernel sqrt(xy) J_nu(xy) is a unitary involution on
L^2(0, inf) in the continuum; here it is discretized as a dense matrix
K[i, j] = sqrt(x_i y_j) J_nu(x_i y_j) w_j on a shared input/output
grid.  With uniform midpoint weights K is real symmetric, so the matrix
is exactly self-adjoint even though its unitarity holds only up to
quadrature error (the "involution defect", which is measured, not
enforced).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .grid import GridFunction, l2_norm_sq
from .specfun import bessel_j

__all__ = [
    "HankelOperator",
    "build",
    "get_operator",
    "forward",
    "involution_defect",
    "modified_forward",
]

_MAX_N = 16384
_cache = {}


@dataclass(frozen=True, eq=False)
class HankelOperator:
    nu: float
    grid: object
    kernel: np.ndarray


def build(nu, grid):
    """Assemble the dense transform matrix on `grid` (O(n^2) storage)."""
    if nu < 0:
        raise ValidationError("order nu must be >= 0")
    if grid.n > _MAX_N:
        raise ValidationError(f"dense kernel limited to n <= {_MAX_N} (got n={grid.n})")
    xy = np.outer(grid.nodes, grid.nodes)
    kernel = np.sqrt(xy) * bessel_j(nu, xy) * grid.weights[np.newaxis, :]
    return HankelOperator(nu=float(nu), grid=grid, kernel=kernel)


def get_operator(nu, grid):
    """Cached build; operators are immutable so sharing is safe."""
    key = (float(nu), grid.n, grid.x_max)
    op = _cache.get(key)
    if op is None or op.grid is not grid and not np.array_equal(op.grid.nodes, grid.nodes):
        op = build(nu, grid)
        _cache[key] = op
    return op


def forward(op, f):
    """Apply the transform: (F_nu f)(x_i) = sum_j K[i, j] f(y_j)."""
    if f.grid.n != op.grid.n or f.grid.x_max != op.grid.x_max:
        raise ValidationError("grid function does not live on the operator grid")
    return GridFunction(op.grid, op.kernel @ f.values)


def involution_defect(op, f):
    """Relative defect ||F(F f) - f|| / ||f|| of the discrete involution."""
    nrm = np.sqrt(l2_norm_sq(f))
    if nrm == 0:
        return 0.0
    ff = op.kernel @ (op.kernel @ f.values)
    diff = GridFunction(op.grid, ff - f.values)
    return np.sqrt(l2_norm_sq(diff)) / nrm


def modified_forward(nu, grid, g, op=None):
    """Modified transform H_nu via the exact conjugation with F_nu.

    H_nu g = x^(-nu-1/2) F_nu(y^(nu+1/2) g), which keeps both transforms
    on one quadrature so the pair is consistent to machine precision.
    """
    if op is None:
        op = get_operator(nu, grid)
    y = grid.nodes
    lifted = y ** (nu + 0.5) * g.values
    transformed = op.kernel @ lifted
    return GridFunction(grid, transformed * grid.nodes ** (-(nu + 0.5)))
