"""Bessel J evaluation and the explicit Bessel-decay constants.

The decay constant ``k_nu`` and its square reciprocal ``c_nu`` are the
two explicit constants entering the small-set uncertainty principle and
the small-set two-time observability constant.  Everything here is a
pure function of its arguments.
"""

import math

import numpy as np
from scipy import special

from .errors import ValidationError

__all__ = [
    "bessel_j",
    "bessel_ratio",
    "gamma",
    "k_nu",
    "c_nu",
    "kernel_derivative_bound_check",
]


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) for order nu >= 0, x >= 0.

    Accepts scalars or arrays.  Relative accuracy ~1e-13 for moderate
    arguments, absolute ~1e-15 in the oscillatory tail.
    """
    if np.any(np.asarray(nu) < 0):
        raise ValidationError("order nu must be >= 0")
    if np.any(np.asarray(x) < 0):
        raise ValidationError("argument x must be >= 0")
    return special.jv(nu, x)


def gamma(x):
    """Gamma function on the positive half-line; rejects x <= 0."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise ValidationError("gamma is restricted to x > 0")
    if xs.ndim == 0:
        return math.gamma(float(xs))
    return special.gamma(xs)


def k_nu(nu):
    """Decay constant k with |J_nu(x)| <= k * x**-0.5 on all of (0, inf).

    For nu > 1/2 this is 2*(Gamma(2 nu)/Gamma(nu + 1/2) + 2**nu).  For
    0 <= nu <= 1/2 the combined formula degenerates (Gamma(2 nu) blows
    up at 0), so the two-branch bound max(1, 2**(1-nu)/Gamma(1/2)) is
    used instead.
    """
    if nu < 0:
        raise ValidationError("order nu must be >= 0")
    if nu > 0.5:
        return 2.0 * (gamma(2.0 * nu) / gamma(nu + 0.5) + 2.0**nu)
    return max(1.0, 2.0 ** (1.0 - nu) / gamma(0.5))


def c_nu(nu):
    """Small-set constant C_nu = (2*Gamma(2 nu)/Gamma(nu+1/2) + 2**(nu+1))**-2.

    The closed form is used for nu >= 1/2; below that it degenerates
    towards 0, so k_nu(nu)**-2 (still a valid decay constant squared)
    is returned instead.
    """
    if nu < 0:
        raise ValidationError("order nu must be >= 0")
    if nu >= 0.5:
        return (2.0 * gamma(2.0 * nu) / gamma(nu + 0.5) + 2.0 ** (nu + 1.0)) ** -2
    return k_nu(nu) ** -2


def bessel_ratio(nu, z):
    """J_nu(z) / z**nu, continuous through z = 0 where it equals 1/(2**nu Gamma(nu+1))."""
    z = np.asarray(z, dtype=float)
    out = np.empty(z.shape, dtype=float)
    small = z < 1e-6
    # two-term series; the z**2 correction keeps continuity tests clean
    c0 = 1.0 / (2.0**nu * gamma(nu + 1.0))
    zs = z[small]
    out[small] = c0 * (1.0 - zs * zs / (4.0 * (nu + 1.0)))
    zb = z[~small]
    out[~small] = special.jv(nu, zb) / zb**nu
    return out if out.ndim else float(out)


_FD_REL_STEP = 1e-4
_FD_TOL = 1e-5

# 4th-order central stencils for d^k/dx^k, k = 1, 2
_STENCILS = {
    1: ([-2, -1, 1, 2], [1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12], 1),
    2: ([-2, -1, 0, 1, 2], [-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12], 2),
}


def kernel_derivative_bound_check(nu, k, samples):
    """Check |d^k/dx^k [J_nu(xy)/(xy)^nu]| <= y**k at every (x, y) sample.

    Derivatives are taken by 4th-order central finite differences with a
    relative step, so the bound is tested up to a small discretization
    allowance (1e-5).  Returns True iff every sample passes.
    """
    if nu < 0:
        raise ValidationError("order nu must be >= 0")
    if k < 0:
        raise ValidationError("derivative order k must be >= 0")
    if k > 2:
        raise ValidationError("finite-difference check supports k <= 2")
    for x, y in samples:
        if k == 0:
            val = abs(bessel_ratio(nu, np.asarray(x * y)))
        else:
            offsets, coeffs, power = _STENCILS[k]
            h = _FD_REL_STEP * max(abs(x), 1.0)
            pts = np.array([x + o * h for o in offsets]) * y
            vals = bessel_ratio(nu, np.abs(pts))
            val = abs(np.dot(coeffs, vals) / h**power)
        if val > y**k + _FD_TOL:
            return False
    return True
