"""Seeded generators for the test-function families.

Three kinds are used throughout:

* ``gauss``   -- superpositions of x^(nu+1/2) e^{-s(x-c)^2} lobes with
  random constant phases; square-integrable data with Gaussian tails on
  both sides of the transform.
* ``packet``  -- the same envelopes modulated by e^{i w x}; their
  transforms concentrate near w, away from both grid ends, which is
  what the transform-fidelity tolerances assume.
* ``bump``    -- compactly supported C-infinity profiles, exactly zero
  outside their support; the right data for inequalities that require
  smooth compactly supported initial states (and for integrands with
  negative powers of x).
"""

import numpy as np

from .grid import GridFunction, l2_norm_sq

__all__ = ["bump_profile", "bump_function", "eigenfunction", "random_family"]


def bump_profile(s):
    """C-infinity bump on (0, 1): exp(-1/(1 - z^2)) with z = 2s - 1, else 0."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 0.0) & (s < 1.0)
    z = 2.0 * s[inside] - 1.0
    out[inside] = np.exp(-1.0 / (1.0 - z * z))
    return out


def bump_function(grid, lo, hi, normalize=True):
    """Smooth bump supported in [lo, hi] sampled on `grid`."""
    vals = bump_profile((grid.nodes - lo) / (hi - lo)).astype(complex)
    f = GridFunction(grid, vals)
    if normalize:
        nrm = np.sqrt(l2_norm_sq(f))
        if nrm > 0:
            f.values /= nrm
    return f


def eigenfunction(grid, nu, s=0.5, normalize=True):
    """x^(nu+1/2) e^{-s x^2}; at s = 1/2 a fixed point of the transform."""
    x = grid.nodes
    f = GridFunction(grid, (x ** (nu + 0.5) * np.exp(-s * x**2)).astype(complex))
    if normalize:
        f.values /= np.sqrt(l2_norm_sq(f))
    return f


def random_family(grid, nu, count, seed, kind="gauss", support=(2.5, 6.0), freq=(4.0, 10.0)):
    """Generate `count` unit-norm random test functions of the given kind."""
    rng = np.random.default_rng(seed)
    x = grid.nodes
    lo, hi = support
    out = []
    for _ in range(count):
        vals = np.zeros(grid.n, dtype=complex)
        for _ in range(int(rng.integers(1, 4))):
            c = rng.uniform(lo, hi)
            phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
            amp = rng.uniform(0.5, 1.0)
            if kind == "gauss":
                s = rng.uniform(1.0, 4.0)
                vals += amp * phase * x ** (nu + 0.5) * np.exp(-s * (x - c) ** 2)
            elif kind == "packet":
                s = rng.uniform(0.5, 2.0)
                w = rng.uniform(*freq)
                vals += amp * phase * x ** (nu + 0.5) * np.exp(-s * (x - c) ** 2 + 1j * w * x)
            elif kind == "bump":
                width = rng.uniform(0.5, 1.5)
                a = min(c, hi - width)
                vals += amp * phase * bump_profile((x - a) / width)
            else:
                raise ValueError(f"unknown family kind {kind!r}")
        f = GridFunction(grid, vals)
        nrm = np.sqrt(l2_norm_sq(f))
        if nrm > 0:
            f.values /= nrm
        out.append(f)
    return out
