"""Radial grids, interval sets, quadrature, norms and finite differences.

The whole package works on a truncated half-line (0, x_max] discretized
by the open midpoint rule: nodes never touch the x = 0 singularity of
the inverse-square potential, and a node belongs to an interval [a, b)
half-open, so interval partitions tile the grid exactly.
"""

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericRangeError, ValidationError

__all__ = [
    "RadialGrid",
    "GridFunction",
    "IntervalSet",
    "InequalityReport",
    "make_grid",
    "l2_norm_sq",
    "mu_nu_measure",
    "weighted_l2_norm_sq",
    "exp_weight",
    "power_weight",
    "derivative",
    "hardy_check",
    "boundary_mass_fraction",
]

_BOUNDARY_FRACTION = 0.05
_BOUNDARY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Midpoint discretization of (0, x_max] with n uniform cells."""

    n: int
    x_max: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def dx(self):
        return self.x_max / self.n


@dataclass(eq=False)
class GridFunction:
    """Complex-valued samples on a RadialGrid."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n,):
            raise ValidationError(
                f"values length {self.values.shape} does not match grid n={self.grid.n}"
            )

    def copy(self):
        return GridFunction(self.grid, self.values.copy())

    def to_csv(self):
        """Serialize as CSV with columns x, re, im."""
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["x", "re", "im"])
        for x, v in zip(self.grid.nodes, self.values):
            w.writerow([repr(float(x)), repr(v.real), repr(v.imag)])
        return buf.getvalue()

    def to_json(self):
        return json.dumps(
            {
                "n": self.grid.n,
                "x_max": self.grid.x_max,
                "values": [[v.real, v.imag] for v in self.values],
            }
        )

    @staticmethod
    def from_csv(text, grid=None):
        rows = list(csv.reader(io.StringIO(text)))[1:]
        xs = np.array([float(r[0]) for r in rows])
        vals = np.array([float(r[1]) + 1j * float(r[2]) for r in rows])
        if grid is None:
            n = len(xs)
            x_max = n * (xs[1] - xs[0]) if n > 1 else 2 * xs[0]
            grid = make_grid(n, x_max)
        if not np.allclose(xs, grid.nodes, rtol=1e-10, atol=1e-12):
            raise ValidationError("CSV nodes do not match the target grid")
        return GridFunction(grid, vals)

    @staticmethod
    def from_json(text, grid=None):
        obj = json.loads(text)
        if grid is None:
            grid = make_grid(obj["n"], obj["x_max"])
        vals = np.array([re + 1j * im for re, im in obj["values"]])
        return GridFunction(grid, vals)


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint intervals [a_i, b_i) in [0, inf)."""

    intervals: tuple = field(default=())

    @staticmethod
    def of(*pairs):
        """Build from (a, b) pairs; overlapping or touching pairs are merged."""
        cleaned = []
        for a, b in pairs:
            a, b = float(a), float(b)
            if not (0 <= a < b):
                raise ValidationError(f"interval [{a}, {b}] must satisfy 0 <= a < b")
            cleaned.append((a, b))
        cleaned.sort()
        merged = []
        for a, b in cleaned:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return IntervalSet(tuple(merged))

    def measure(self):
        return sum(b - a for a, b in self.intervals)

    def is_bounded(self):
        return all(np.isfinite(b) for _, b in self.intervals)

    def indicator(self, nodes):
        """Membership of nodes, half-open convention a <= x < b."""
        mask = np.zeros(len(nodes), dtype=bool)
        for a, b in self.intervals:
            mask |= (nodes >= a) & (nodes < b)
        return mask

    def complement(self, x_max):
        """Complement within [0, x_max)."""
        out = []
        lo = 0.0
        for a, b in self.intervals:
            if a > lo:
                out.append((lo, min(a, x_max)))
            lo = max(lo, b)
            if lo >= x_max:
                break
        if lo < x_max:
            out.append((lo, x_max))
        return IntervalSet(tuple((a, b) for a, b in out if b > a))


@dataclass
class InequalityReport:
    """Outcome of one inequality instance: lhs <= rhs with a named constant."""

    name: str
    lhs: float
    rhs: float
    constant: float
    ratio: float
    passed: bool
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        con = self.metadata.get("constant_detail", {"value": self.constant})
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": con,
            "ratio": self.ratio,
            "passed": bool(self.passed),
            **{
                k: v
                for k, v in self.metadata.items()
                if k != "constant_detail"
            },
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=_json_default)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def make_grid(n, x_max):
    """Open midpoint grid: x_i = (i - 1/2) x_max / n, uniform weights x_max / n."""
    if n < 16:
        raise ValidationError("grid requires n >= 16")
    if x_max <= 0:
        raise ValidationError("x_max must be positive")
    dx = x_max / n
    nodes = (np.arange(n) + 0.5) * dx
    weights = np.full(n, dx)
    return RadialGrid(n=n, x_max=float(x_max), nodes=nodes, weights=weights)


def l2_norm_sq(f, on=None):
    """Quadrature of |f|^2, optionally restricted to an IntervalSet."""
    vals = np.abs(f.values) ** 2
    if on is None:
        return float(np.dot(f.grid.weights, vals))
    mask = on.indicator(f.grid.nodes)
    return float(np.dot(f.grid.weights[mask], vals[mask]))


def mu_nu_measure(A, nu):
    """mu_nu(A) = integral over A of x^(2 nu + 1) dx, in closed form."""
    if not A.is_bounded():
        raise ValidationError("mu_nu requires bounded intervals")
    p = 2.0 * nu + 2.0
    return float(sum((b**p - a**p) / p for a, b in A.intervals))


def exp_weight(lam, beta=1.0, sign=1.0):
    """Weight x -> exp(sign * lam * x**beta)."""
    if lam < 0:
        raise ValidationError("lambda must be >= 0")
    if beta <= 0:
        raise ValidationError("beta must be > 0")
    return lambda x: np.exp(sign * lam * np.asarray(x) ** beta)


def power_weight(k, sign=1.0):
    """Weight x -> x**(sign * 2k) for integer k >= 0."""
    if k < 0 or k != int(k):
        raise ValidationError("k must be a nonnegative integer")
    return lambda x: np.asarray(x, dtype=float) ** (sign * 2 * k)


def weighted_l2_norm_sq(f, weight):
    """Quadrature of weight(x) |f(x)|^2 with an overflow guard."""
    w = np.asarray(weight(f.grid.nodes), dtype=float)
    peak = np.max(w) * max(np.max(np.abs(f.values)) ** 2, 1e-300)
    if not np.isfinite(peak) or peak > np.finfo(float).max / 1e6:
        raise NumericRangeError("weighted norm would overflow float range")
    return float(np.dot(f.grid.weights, w * np.abs(f.values) ** 2))


def boundary_mass_fraction(f, fraction=_BOUNDARY_FRACTION):
    """Largest share of |f|^2-mass within `fraction` of either grid end."""
    total = l2_norm_sq(f)
    if total == 0:
        return 0.0
    n_edge = max(1, int(round(fraction * f.grid.n)))
    w = f.grid.weights
    vals = np.abs(f.values) ** 2
    lo = float(np.dot(w[:n_edge], vals[:n_edge]))
    hi = float(np.dot(w[-n_edge:], vals[-n_edge:]))
    return max(lo, hi) / total


# 4th-order first-derivative stencils (interior central, one-sided ends)
_D1_INTERIOR = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D1_FORWARD = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0


def derivative(f):
    """First derivative by 4th-order finite differences.

    Interior nodes use the 5-point central stencil; the two nodes at
    each end use one-sided 5-point formulas.  Functions whose support
    touches a grid end trigger a warning (the derivative near that end
    is then polluted by the implicit truncation).
    """
    if boundary_mass_fraction(f) > _BOUNDARY_TOL:
        warnings.warn("support touches the grid boundary; derivative may be inaccurate there")
    v = f.values
    h = f.grid.dx
    out = np.empty_like(v)
    out[2:-2] = (
        _D1_INTERIOR[0] * v[:-4]
        + _D1_INTERIOR[1] * v[1:-3]
        + _D1_INTERIOR[3] * v[3:-1]
        + _D1_INTERIOR[4] * v[4:]
    ) / h
    for i in (0, 1):
        out[i] = np.dot(_D1_FORWARD, v[i : i + 5]) / h
        out[-1 - i] = -np.dot(_D1_FORWARD, v[-1 - i : -6 - i : -1]) / h
    return GridFunction(f.grid, out)


def hardy_check(u):
    """Hardy inequality report: (1/4) int |u|^2/x^2 <= int |u'|^2."""
    x = u.grid.nodes
    lhs = 0.25 * float(np.dot(u.grid.weights, np.abs(u.values) ** 2 / x**2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        du = derivative(u)
    rhs = l2_norm_sq(du)
    flags = []
    if boundary_mass_fraction(u) > _BOUNDARY_TOL:
        flags.append("boundary_mass")
    passed = lhs <= rhs * (1.0 + 1e-6) or (lhs == 0.0 and rhs == 0.0)
    return InequalityReport(
        name="hardy",
        lhs=lhs,
        rhs=rhs,
        constant=0.25,
        ratio=lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else np.inf),
        passed=passed,
        metadata={"grid": {"n": u.grid.n, "x_max": u.grid.x_max}, "flags": flags},
    )
