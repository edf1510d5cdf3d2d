"""Numerical certification of the observability and unique continuation
inequalities.

Explicit-constant inequalities (small-set two-time observability, the
small-set uncertainty principle, Hardy, the summation bounds) are
checked against their printed constants with no free parameters.

Inequalities whose constants the theory only asserts to exist are
certified by one fitting protocol: grid-search the interpolation
exponent theta over {0.05, ..., 0.95} where the form has one, take for
each candidate the smallest C that covers every sample, and keep the
pair minimizing C.  The report then carries the witness (C, theta) and
the inequality is re-evaluated against it, so `passed` means "certified
on this family by these constants".
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import NumericRangeError, RegimeError, ValidationError
from .grid import (
    GridFunction,
    InequalityReport,
    IntervalSet,
    exp_weight,
    l2_norm_sq,
    mu_nu_measure,
    weighted_l2_norm_sq,
)
from .hankel import forward, get_operator
from .propagator import EvolutionConfig, evolve_spectral, sobolev_proxy
from .specfun import c_nu, gamma, k_nu

__all__ = [
    "VerificationSpec",
    "ConstantEstimate",
    "verify_uncertainty",
    "verify_two_point",
    "verify_time_interval",
    "verify_t3",
    "verify_t4",
    "verify_t5",
    "verify_t8",
    "verify_t9",
    "verify_l7",
    "verify_c1",
    "verify_c2",
    "verify_interpolation",
    "lr_bound_check",
    "transform_supported_function",
]

THETA_GRID = np.round(np.arange(0.05, 0.951, 0.05), 2)


@dataclass
class VerificationSpec:
    """Parameter record for the verification routines; fields optional per inequality."""

    nu: float
    A: IntervalSet = None
    B: IntervalSet = None
    S: float = 0.0
    T: float = 1.0
    lam: float = 1.0
    lam2: float = 1.0
    beta: float = 2.0
    gamma_exp: float = 0.5
    b: float = 1.0
    N: float = 1.0
    epsilon: float = 0.5

    def __post_init__(self):
        if self.T is not None and self.S is not None and not self.T > self.S >= 0:
            raise ValidationError("need T > S >= 0")


@dataclass
class ConstantEstimate:
    form: str
    fitted_C: float
    theta: float = None
    samples: int = 0
    max_ratio: float = 0.0

    def as_dict(self):
        return {
            "form": self.form,
            "fitted_C": self.fitted_C,
            "theta": self.theta,
            "samples": self.samples,
            "max_ratio": self.max_ratio,
        }


def _as_list(u0s):
    if isinstance(u0s, GridFunction):
        return [u0s]
    return list(u0s)


def _report(name, lhs, rhs, constant, passed, meta):
    base = rhs / constant if constant > 0 else 0.0
    ratio = lhs / base if base > 0 else (0.0 if lhs == 0 else math.inf)
    return InequalityReport(
        name=name, lhs=lhs, rhs=rhs, constant=constant, ratio=ratio, passed=passed, metadata=meta
    )


def _meta(nu, grid, params, seed=None, flags=(), estimate=None, extra=None):
    meta = {
        "nu": nu,
        "params": params,
        "seed": seed,
        "grid": {"n": grid.n, "x_max": grid.x_max},
        "flags": list(flags),
    }
    if estimate is not None:
        meta["constant_detail"] = estimate.as_dict()
        meta["samples"] = estimate.samples
    if extra:
        meta.update(extra)
    return meta


def _fit_product_form(samples, prefactor, exponent_p):
    """Fit (C, theta) for lhs <= C * prefactor * obs^(theta^p) * data^(1-theta^p)."""
    best = (math.inf, None)
    for theta in THETA_GRID:
        q = theta**exponent_p
        worst = 0.0
        ok = True
        for lhs, obs, data in samples:
            if lhs == 0:
                continue
            if obs <= 0 or data <= 0:
                ok = False
                break
            worst = max(worst, lhs / (prefactor * obs**q * data ** (1.0 - q)))
        if ok and worst < best[0]:
            best = (worst, theta)
    if best[1] is None:
        return 0.0, float(THETA_GRID[len(THETA_GRID) // 2])
    return best


def _solve_c_exponential(ratio, lin, exp_coef):
    """Smallest C >= 0 with C * lin * e^(C * exp_coef) >= ratio (Lambert W)."""
    if ratio <= 0:
        return 0.0
    if exp_coef <= 0:
        return ratio / lin
    w = special.lambertw(ratio * exp_coef / lin).real
    return float(w / exp_coef)


def _solve_c_monotone(rhs_of_c, lhs, hi=1024.0):
    """Smallest C >= 0 with rhs_of_c(C) >= lhs, by bisection on a monotone form."""
    if lhs <= 0:
        return 0.0
    if rhs_of_c(0.0) >= lhs:
        return 0.0
    lo, cap = 0.0, hi
    while rhs_of_c(cap) < lhs:
        cap *= 2.0
        if cap > 1e9:
            raise NumericRangeError("no finite constant covers this sample")
    hi = cap
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if rhs_of_c(mid) >= lhs:
            hi = mid
        else:
            lo = mid
    return hi


def _evolved(nu, u0, t):
    if t == 0:
        return u0
    return evolve_spectral(EvolutionConfig(nu, u0.grid, t), u0)


# ---------------------------------------------------------------------------
# uncertainty principle and two-time observability


def verify_uncertainty(nu, A, B, fs, seed=None):
    """Uncertainty principle ||f|| <= C (||f||_{A^c} + ||F f||_{B^c}).

    In the small-set regime k_nu sqrt(2 pi |A||B|) < 1 the explicit
    constant 1 + 1/(1 - k_nu sqrt(2 pi |A||B|)) is used; otherwise C is
    fitted as the worst empirical ratio over the family.
    """
    if not (A.is_bounded() and B.is_bounded()):
        raise ValidationError("A and B must have finite measure")
    fs = _as_list(fs)
    grid = fs[0].grid
    op = get_operator(nu, grid)
    Ac = A.complement(grid.x_max)
    Bc = B.complement(grid.x_max)
    small = k_nu(nu) * math.sqrt(2.0 * math.pi * A.measure() * B.measure())
    explicit = small < 1.0

    rows = []
    for f in fs:
        lhs = math.sqrt(l2_norm_sq(f))
        obs = math.sqrt(l2_norm_sq(f, Ac)) + math.sqrt(l2_norm_sq(forward(op, f), Bc))
        rows.append((lhs, obs))

    if explicit:
        constant = 1.0 + 1.0 / (1.0 - small)
        estimate = None
        form = "1 + 1/(1 - k_nu sqrt(2 pi |A||B|))"
    else:
        ratios = [lhs / obs for lhs, obs in rows if obs > 0]
        constant = max(ratios, default=0.0)
        estimate = ConstantEstimate("fitted max ratio", constant, None, len(rows), 1.0)
        form = "fitted"

    worst = max(rows, key=lambda r: r[0] - constant * r[1], default=(0.0, 0.0))
    lhs, obs = worst
    rhs = constant * obs
    passed = all(l <= constant * o or l == 0 for l, o in rows)
    meta = _meta(
        nu,
        grid,
        {"A": A.intervals, "B": B.intervals, "regime": "small-set" if explicit else "fitted"},
        seed,
        flags=[] if explicit else ["fitted-constant"],
        estimate=estimate,
        extra={"constant_form": form, "k_nu": k_nu(nu)},
    )
    return _report("t2", lhs, rhs, constant, passed, meta)


def verify_two_point(spec, u0s, case, seed=None):
    """Two-time observability with the case-specific constant of the theory.

    case "i"  : half-integer nu, constant C e^{C mu(A) mu(B) / (T-S)^(2nu+2)}, C fitted.
    case "ii" : small sets, printed closed-form constant, nothing fitted.
    case "iii": A=[0,a], B=[0,b], constant C e^{C(1 + ab/(T-S))}, C fitted.
    """
    u0s = _as_list(u0s)
    grid = u0s[0].grid
    nu, A, B, S, T = spec.nu, spec.A, spec.B, spec.S, spec.T
    dt = T - S
    flags = []

    if case == "i" and abs(2.0 * nu - round(2.0 * nu)) > 1e-9:
        raise ValidationError("case (i) needs half-integer nu")
    if case == "iii":
        for s_, name in ((A, "A"), (B, "B")):
            if len(s_.intervals) != 1 or s_.intervals[0][0] != 0.0:
                raise ValidationError(f"case (iii) needs {name} = [0, {name.lower()}]")
    if case == "ii":
        pAB = math.pi * A.measure() * B.measure()
        cndt = c_nu(nu) * dt
        if pAB >= cndt:
            raise RegimeError(
                f"case (ii) regime pi|A||B| < C_nu (T-S) violated: {pAB:.4g} >= {cndt:.4g}"
            )
        if A.measure() * B.measure() >= c_nu(nu):
            # printed side condition |A||B| < C_nu disagrees with the
            # dimensional one actually needed; record it
            flags.append("printed-regime-disagrees")

    Ac = A.complement(grid.x_max)
    Bc = B.complement(grid.x_max)
    rows = []
    for u0 in u0s:
        lhs = l2_norm_sq(u0)
        uS = _evolved(nu, u0, S)
        uT = _evolved(nu, u0, T)
        obs = l2_norm_sq(uS, Ac) + l2_norm_sq(uT, Bc)
        rows.append((lhs, obs))

    estimate = None
    if case == "ii":
        root_c = math.sqrt(c_nu(nu) * dt)
        root_ab = math.sqrt(math.pi * A.measure() * B.measure())
        constant = (2.0 * root_c - root_ab) / (root_c - root_ab)
        form = "(2 sqrt(C_nu(T-S)) - sqrt(pi|A||B|)) / (sqrt(C_nu(T-S)) - sqrt(pi|A||B|))"
    else:
        if case == "i":
            X = mu_nu_measure(A, nu) * mu_nu_measure(B, nu) / dt ** (2.0 * nu + 2.0)
            form = "C exp(C mu(A) mu(B)/(T-S)^(2nu+2))"
        else:
            a = A.intervals[0][1]
            b = B.intervals[0][1]
            X = 1.0 + a * b / dt
            form = "C exp(C (1 + ab/(T-S)))"
        cs = [_solve_c_exponential(l / o, 1.0, X) for l, o in rows if o > 0 and l > 0]
        C = max(cs, default=0.0)
        constant = C * math.exp(C * X)
        estimate = ConstantEstimate(form, C, None, len(rows), 1.0 if cs else 0.0)

    worst = max(rows, key=lambda r: r[0] - constant * r[1], default=(0.0, 0.0))
    lhs, obs = worst
    rhs = constant * obs
    passed = all(l <= constant * o or l == 0 for l, o in rows)
    meta = _meta(
        nu,
        grid,
        {
            "A": A.intervals,
            "B": B.intervals,
            "S": S,
            "T": T,
            "case": case,
        },
        seed,
        flags=flags,
        estimate=estimate,
        extra={"constant_form": form},
    )
    return _report(f"t1{case}", lhs, rhs, constant, passed, meta)


def verify_time_interval(nu, r, T, u0s, seed=None, n_time=16):
    """Observability from [0,r]^c over the time interval [0, T] (Simpson in t)."""
    if n_time < 16 or n_time % 2:
        raise ValidationError("need an even number of Simpson intervals, >= 16")
    u0s = _as_list(u0s)
    grid = u0s[0].grid
    region = IntervalSet.of((0.0, r)).complement(grid.x_max)
    times = np.linspace(0.0, T, n_time + 1)
    w = np.ones(n_time + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= T / (3.0 * n_time)

    rows = []
    for u0 in u0s:
        lhs = l2_norm_sq(u0)
        obs = sum(
            wi * l2_norm_sq(_evolved(nu, u0, t), region) for wi, t in zip(w, times)
        )
        rows.append((lhs, obs))

    lin = 1.0 + 1.0 / T
    B_exp = r * r * lin
    cs = [_solve_c_exponential(l / o, lin, B_exp) for l, o in rows if o > 0 and l > 0]
    C = max(cs, default=0.0)
    constant = C * lin * math.exp(C * B_exp)
    estimate = ConstantEstimate("C(1+1/T) exp(C r^2 (1+1/T))", C, None, len(rows), 1.0 if cs else 0.0)
    worst = max(rows, key=lambda rr: rr[0] - constant * rr[1], default=(0.0, 0.0))
    lhs, obs = worst
    passed = all(l <= constant * o or l == 0 for l, o in rows)
    meta = _meta(
        nu,
        grid,
        {"r": r, "T": T, "time_nodes": n_time + 1, "skipped_time_mass": 0.0},
        seed,
        estimate=estimate,
    )
    return _report("c3", lhs, constant * obs, constant, passed, meta)


# ---------------------------------------------------------------------------
# one-time unique continuation


def _check_compact(u0s, label="u0"):
    from .grid import boundary_mass_fraction

    for u in u0s:
        if l2_norm_sq(u) > 0 and boundary_mass_fraction(u) > 1e-8:
            raise ValidationError(f"{label} must be supported inside the grid")


def verify_t3(spec, u0s, variant, seed=None):
    """Unique continuation from [0,b]^c at one time, exponential-decay data."""
    u0s = _as_list(u0s)
    _check_compact(u0s)
    grid = u0s[0].grid
    nu, b, T, lam = spec.nu, spec.b, spec.T, spec.lam
    obs_region = IntervalSet.of((0.0, b)).complement(grid.x_max)

    rows = []
    for u0 in u0s:
        lhs = l2_norm_sq(u0)
        uT = _evolved(nu, u0, T)
        obs = l2_norm_sq(uT, obs_region)
        if variant == "i":
            data = weighted_l2_norm_sq(u0, exp_weight(lam))
        elif variant == "ii":
            data = weighted_l2_norm_sq(u0, exp_weight(lam, beta=spec.beta))
        else:
            raise ValidationError("variant must be 'i' or 'ii'")
        rows.append((lhs, obs, data))

    if variant == "i":
        pref = 1.0 + (b / (lam * T)) ** (2.0 * nu + 2.0)
        p = 1.0 + b / (lam * T)
        C, theta = _fit_product_form(rows, pref, p)
        q = theta**p
        constant_of = lambda: C * pref
        form = "C (1 + (b/(lam T))^(2nu+2)) obs^q data^(1-q), q = theta^(1+b/(lam T))"
        estimate = ConstantEstimate(form, C, theta, len(rows), 1.0 if C > 0 else 0.0)

        def rhs_of(row):
            _, obs, data = row
            return C * pref * obs**q * data ** (1.0 - q)

    else:
        beta, gam = spec.beta, spec.gamma_exp
        if beta <= 1:
            raise ValidationError("variant (ii) needs beta > 1")
        if not 0 < gam < 1:
            raise ValidationError("gamma must lie in (0, 1)")
        K = b**beta / (lam * (1.0 - gam) * T**beta)

        def rhs_c(C, row):
            _, obs, data = row
            expo = (C**beta * K) ** (1.0 / (beta - 1.0))
            if expo > 700:
                return math.inf
            return C * math.exp(expo) * obs**gam * data ** (1.0 - gam)

        cs = [
            _solve_c_monotone(lambda c: rhs_c(c, row), row[0])
            for row in rows
            if row[0] > 0
        ]
        C = max(cs, default=0.0)
        theta = None
        form = "C exp((C^beta b^beta/(lam(1-gamma) T^beta))^(1/(beta-1))) obs^gamma data^(1-gamma)"
        estimate = ConstantEstimate(form, C, gam, len(rows), 1.0 if cs else 0.0)

        def rhs_of(row):
            return rhs_c(C, row)

    rhss = [rhs_of(r) for r in rows]
    passed = all(l <= rh or l == 0 for (l, _, _), rh in zip(rows, rhss))
    idx = int(np.argmax([l - rh for (l, _, _), rh in zip(rows, rhss)])) if rows else 0
    lhs, obs, data = rows[idx]
    rhs = rhss[idx]
    expo = theta ** (1.0 + b / (lam * T)) if variant == "i" else spec.gamma_exp
    base = obs**expo * data ** (1.0 - expo)
    constant = rhs / base if base > 0 else 0.0
    meta = _meta(
        nu,
        grid,
        {"b": b, "T": T, "lam": lam, "variant": variant,
         **({"beta": spec.beta, "gamma": spec.gamma_exp} if variant == "ii" else {})},
        seed,
        estimate=estimate,
    )
    return _report(f"t3{variant}", lhs, rhs, constant, passed, meta)


def verify_t4(spec, u0s, seed=None):
    """One-time unique continuation between two intervals A and B."""
    u0s = _as_list(u0s)
    _check_compact(u0s)
    grid = u0s[0].grid
    nu, lam, T = spec.nu, spec.lam, spec.T
    (a1, a2), (b1, b2) = spec.A.intervals[0], spec.B.intervals[0]
    if len(spec.A.intervals) != 1 or len(spec.B.intervals) != 1:
        raise ValidationError("A and B must be single intervals")
    a, b = a2 - a1, b2 - b1
    if a <= 0 or b <= 0:
        raise ValidationError("degenerate interval")
    x0, x1 = 0.5 * (a1 + a2), 0.5 * (b1 + b2)
    p = 1.0 + (abs(x0 - x1) + a / 2.0 + b / 2.0) / min(lam * T, b / 2.0)
    pref = (a2 ** (2.0 * nu + 2.0) - a1 ** (2.0 * nu + 2.0)) * min(lam * T, b) ** (
        -(2.0 * nu + 2.0)
    )

    rows = []
    for u0 in u0s:
        uT = _evolved(nu, u0, T)
        lhs = l2_norm_sq(uT, spec.A)
        obs = l2_norm_sq(uT, spec.B)
        data = weighted_l2_norm_sq(u0, exp_weight(lam))
        rows.append((lhs, obs, data))

    C, theta = _fit_product_form(rows, pref, p)
    q = theta**p
    rhss = [C * pref * o**q * d ** (1.0 - q) if o > 0 and d > 0 else 0.0 for _, o, d in rows]
    passed = all(l <= rh or l == 0 for (l, _, _), rh in zip(rows, rhss))
    idx = int(np.argmax([l - rh for (l, _, _), rh in zip(rows, rhss)])) if rows else 0
    lhs, obs, data = rows[idx]
    rhs = rhss[idx]
    constant = C * pref
    estimate = ConstantEstimate(
        "C mu-type(A) ((lam T) ^ b)^-(2nu+2) obs^(theta^p) data^(1-theta^p)",
        C,
        theta,
        len(rows),
        1.0 if C > 0 else 0.0,
    )
    meta = _meta(
        nu,
        grid,
        {"A": spec.A.intervals, "B": spec.B.intervals, "lam": lam, "T": T, "p": p},
        seed,
        estimate=estimate,
    )
    return _report("t4", lhs, rhs, constant, passed, meta)


def verify_t5(nu, b, T, N, u0s, seed=None):
    """Observability from [0,b]^c for data supported in [0, N]."""
    u0s = _as_list(u0s)
    grid = u0s[0].grid
    inside = IntervalSet.of((0.0, N))
    for u0 in u0s:
        total = l2_norm_sq(u0)
        if total > 0 and (total - l2_norm_sq(u0, inside)) / total > 1e-10:
            raise ValidationError("u0 must be supported in [0, N]")
    obs_region = IntervalSet.of((0.0, b)).complement(grid.x_max)
    X = 1.0 + b * N / T
    rows = []
    for u0 in u0s:
        lhs = l2_norm_sq(u0)
        obs = l2_norm_sq(_evolved(nu, u0, T), obs_region)
        rows.append((lhs, obs))
    cs = [math.log(l / o) / X for l, o in rows if l > 0 and o > 0 and l > o]
    C = max(cs, default=0.0)
    constant = math.exp(C * X)
    estimate = ConstantEstimate("exp(C(1 + bN/T))", C, None, len(rows), 1.0 if cs else 0.0)
    worst = max(rows, key=lambda r: r[0] - constant * r[1], default=(0.0, 0.0))
    lhs, obs = worst
    passed = all(l <= constant * o or l == 0 for l, o in rows)
    ratios = [l / o for l, o in rows if o > 0]
    meta = _meta(
        nu,
        grid,
        {"b": b, "T": T, "N": N},
        seed,
        estimate=estimate,
        extra={"observed_ratio_range": [min(ratios, default=0.0), max(ratios, default=0.0)]},
    )
    return _report("t5", lhs, constant * obs, constant, passed, meta)


def verify_t8(spec, u0s, seed=None):
    """Weighted-target epsilon inequality at one time with interval observation."""
    u0s = _as_list(u0s)
    _check_compact(u0s)
    grid = u0s[0].grid
    nu, lam1, lam2, T, eps = spec.nu, spec.lam, spec.lam2, spec.T, spec.epsilon
    if not 0 < eps < 1:
        raise ValidationError("epsilon must lie in (0, 1)")
    (b1, b2) = spec.B.intervals[0]
    b = b2 - b1
    x0 = 0.5 * (b1 + b2)
    wmin = min(lam1 * T, b / 2.0)
    kappa = (x0 + b / 2.0 + 1.0 / lam2) / wmin
    s_exp = 1.0 / (lam2 * wmin)

    rows = []
    for u0 in u0s:
        uT = _evolved(nu, u0, T)
        lhs = weighted_l2_norm_sq(uT, exp_weight(lam2, sign=-1.0))
        A1 = weighted_l2_norm_sq(u0, exp_weight(lam1))
        B1 = l2_norm_sq(uT, spec.B)
        rows.append((lhs, A1, B1))

    def rhs_c(C, row):
        _, A1, B1 = row
        pref_expo = C * (1.0 + kappa)
        inner = (-1.0 - C * s_exp) * math.log(eps)
        if pref_expo > 700 or inner > 700:
            return math.inf
        return math.exp(pref_expo) * (eps * A1 + eps * math.exp(inner) * B1)

    cs = [_solve_c_monotone(lambda c: rhs_c(c, row), row[0]) for row in rows if row[0] > 0]
    C = max(cs, default=0.0)
    rhss = [rhs_c(C, row) for row in rows]
    passed = all(l <= rh or l == 0 for (l, _, _), rh in zip(rows, rhss))
    idx = int(np.argmax([l - rh for (l, _, _), rh in zip(rows, rhss)])) if rows else 0
    lhs = rows[idx][0]
    rhs = rhss[idx]
    bracket = eps * rows[idx][1] + eps * math.exp((-1.0 - C * s_exp) * math.log(eps)) * rows[idx][2]
    constant = rhs / bracket if bracket > 0 else 0.0
    estimate = ConstantEstimate(
        "exp(C(1+(x0+b/2+1/lam2)/w)) (eps A1 + eps eps^-(1+C/(lam2 w)) B1)",
        C,
        None,
        len(rows),
        1.0 if cs else 0.0,
    )
    meta = _meta(
        nu,
        grid,
        {"B": spec.B.intervals, "lam1": lam1, "lam2": lam2, "T": T, "epsilon": eps},
        seed,
        estimate=estimate,
    )
    return _report("t8", lhs, rhs, constant, passed, meta)


def verify_t9(spec, u0s, seed=None):
    """Full-norm epsilon inequality with Sobolev and inverse-power data terms."""
    u0s = _as_list(u0s)
    _check_compact(u0s)
    grid = u0s[0].grid
    nu, lam, T, eps = spec.nu, spec.lam, spec.T, spec.epsilon
    if not 0.15 <= eps < 1:
        raise ValidationError("epsilon must lie in [0.15, 1) to stay in float range")
    m = int(nu) + 3
    (b1, b2) = spec.B.intervals[0]
    b = b2 - b1
    x0 = 0.5 * (b1 + b2)
    kappa = (x0 + b / 2.0 + 1.0) / min(lam * T, b / 2.0)
    poly = (T + 1.0 / T) ** m * (1.0 + T) ** (4 * m)
    eps_factor = eps * math.exp(1.0 / eps**2)

    x = grid.nodes
    rows = []
    for u0 in u0s:
        lhs = l2_norm_sq(u0)
        inv = float(np.dot(grid.weights, x ** (-4.0 * m) * np.abs(u0.values) ** 2))
        if not np.isfinite(inv) or inv > 1e100:
            raise NumericRangeError("x^(-4([nu]+3)) integral blows up; support too close to 0")
        A2 = weighted_l2_norm_sq(u0, exp_weight(lam)) + sobolev_proxy(u0, 4 * m) + inv
        B2 = l2_norm_sq(_evolved(nu, u0, T), spec.B)
        rows.append((lhs, A2, B2))

    def rhs_c(C, row):
        _, A2, B2 = row
        expo = C ** (1.0 + kappa)
        if expo > 700:
            return math.inf
        return poly * math.exp(expo) * (eps * A2 + eps_factor * B2)

    cs = [_solve_c_monotone(lambda c: rhs_c(c, row), row[0]) for row in rows if row[0] > 0]
    C = max(cs, default=0.0)
    rhss = [rhs_c(C, row) for row in rows]
    passed = all(l <= rh or l == 0 for (l, _, _), rh in zip(rows, rhss))
    idx = int(np.argmax([l - rh for (l, _, _), rh in zip(rows, rhss)])) if rows else 0
    lhs = rows[idx][0]
    rhs = rhss[idx]
    bracket = eps * rows[idx][1] + eps_factor * rows[idx][2]
    constant = rhs / bracket if bracket > 0 else 0.0
    estimate = ConstantEstimate(
        "(T+1/T)^([nu]+3) (1+T)^(4([nu]+3)) exp(C^(1+kappa)) (eps A2 + eps e^(1/eps^2) B2)",
        C,
        None,
        len(rows),
        1.0 if cs else 0.0,
    )
    meta = _meta(
        nu,
        grid,
        {"B": spec.B.intervals, "lam": lam, "T": T, "epsilon": eps, "sobolev_order": 4 * m},
        seed,
        estimate=estimate,
        extra={"eps_factor": eps_factor},
    )
    return _report("t9", lhs, rhs, constant, passed, meta)


# ---------------------------------------------------------------------------
# interpolation inequalities for compactly band-limited functions


def transform_supported_function(nu, grid, lo, hi):
    """Pair (f, h): h a smooth bump in [lo, hi], f its (inverse) transform.

    The involution makes the inverse transform the transform itself, so
    supp F_nu f = [lo, hi] holds exactly by construction of h.
    """
    from .families import bump_function

    h = bump_function(grid, lo, hi)
    op = get_operator(nu, grid)
    f = forward(op, h)
    return f, h


def _interp_rows(nu, grid, pairs, lam, lhs_region, obs_region, beta=1.0):
    rows = []
    for f, h in pairs:
        lhs = l2_norm_sq(f) if lhs_region is None else l2_norm_sq(f, lhs_region)
        obs = l2_norm_sq(f, obs_region)
        data = weighted_l2_norm_sq(h, exp_weight(lam, beta=beta))
        rows.append((lhs, obs, data))
    return rows


def verify_l7(nu, A, B, lam, pairs, seed=None):
    """Interpolation inequality between two intervals for band-limited f."""
    grid = pairs[0][0].grid
    (a1, a2), (b1, b2) = A.intervals[0], B.intervals[0]
    a, b = a2 - a1, b2 - b1
    if a <= 0 or b <= 0:
        raise ValidationError("degenerate interval")
    x0, x1 = 0.5 * (a1 + a2), 0.5 * (b1 + b2)
    p = 1.0 + (abs(x0 - x1) + a / 2.0 + b / 2.0) / min(lam, b / 2.0)
    pref = (a2 ** (2.0 * nu + 2.0) - a1 ** (2.0 * nu + 2.0)) * (
        lam ** (-(2.0 * nu + 2.0)) + b ** (-(2.0 * nu + 2.0))
    )
    rows = _interp_rows(nu, grid, pairs, lam, A, B)
    C, theta = _fit_product_form(rows, pref, p)
    q = theta**p
    rhss = [C * pref * o**q * d ** (1.0 - q) if o > 0 and d > 0 else 0.0 for _, o, d in rows]
    passed = all(l <= rh or l == 0 for (l, _, _), rh in zip(rows, rhss))
    idx = int(np.argmax([l - rh for (l, _, _), rh in zip(rows, rhss)])) if rows else 0
    lhs, obs, data = rows[idx]
    estimate = ConstantEstimate("C (mu A)(lam^-(2nu+2)+b^-(2nu+2)) obs^(th^p) data^(1-th^p)",
                                C, theta, len(rows), 1.0 if C > 0 else 0.0)
    meta = _meta(nu, grid, {"A": A.intervals, "B": B.intervals, "lam": lam, "p": p},
                 seed, estimate=estimate)
    return _report("l7", lhs, rhss[idx], C * pref, passed, meta)


def verify_c1(nu, b, lam, pairs, seed=None):
    """Whole-norm interpolation from [0,b]^c against the e^{lam y} transform weight."""
    grid = pairs[0][0].grid
    obs_region = IntervalSet.of((0.0, b)).complement(grid.x_max)
    pref = 1.0 + (b / lam) ** (2.0 * nu + 2.0)
    p = 1.0 + b / lam
    rows = _interp_rows(nu, grid, pairs, lam, None, obs_region)
    C, theta = _fit_product_form(rows, pref, p)
    q = theta**p
    rhss = [C * pref * o**q * d ** (1.0 - q) if o > 0 and d > 0 else 0.0 for _, o, d in rows]
    passed = all(l <= rh or l == 0 for (l, _, _), rh in zip(rows, rhss))
    idx = int(np.argmax([l - rh for (l, _, _), rh in zip(rows, rhss)])) if rows else 0
    lhs, obs, data = rows[idx]
    estimate = ConstantEstimate("C (1 + (b/lam)^(2nu+2)) obs^(th^(1+b/lam)) data^(1-th^(1+b/lam))",
                                C, theta, len(rows), 1.0 if C > 0 else 0.0)
    meta = _meta(nu, grid, {"b": b, "lam": lam}, seed, estimate=estimate)
    return _report("c1", lhs, rhss[idx], C * pref, passed, meta)


def verify_c2(nu, b, N, pairs, seed=None):
    """Pure exponential form for transforms supported in [0, N]."""
    grid = pairs[0][0].grid
    inside = IntervalSet.of((0.0, N))
    for _, h in pairs:
        tot = l2_norm_sq(h)
        if tot > 0 and (tot - l2_norm_sq(h, inside)) / tot > 1e-10:
            raise ValidationError("transform support must lie in [0, N]")
    obs_region = IntervalSet.of((0.0, b)).complement(grid.x_max)
    X = 1.0 + b * N
    rows = [(l2_norm_sq(f), l2_norm_sq(f, obs_region)) for f, _ in pairs]
    cs = [math.log(l / o) / X for l, o in rows if l > o > 0]
    C = max(cs, default=0.0)
    constant = math.exp(C * X)
    estimate = ConstantEstimate("exp(C(1 + bN))", C, None, len(rows), 1.0 if cs else 0.0)
    worst = max(rows, key=lambda r: r[0] - constant * r[1], default=(0.0, 0.0))
    lhs, obs = worst
    passed = all(l <= constant * o or l == 0 for l, o in rows)
    meta = _meta(nu, grid, {"b": b, "N": N}, seed, estimate=estimate)
    return _report("c2", lhs, constant * obs, constant, passed, meta)


def verify_interpolation(nu, A, B, lam, pairs, N=None, b=None, seed=None):
    """Run the three interpolation forms on one family; returns a dict of reports."""
    b_edge = b if b is not None else B.intervals[0][0]
    if N is None:
        # infer the transform support bound from the data
        N = 0.0
        for _, h in pairs:
            nz = h.grid.nodes[np.abs(h.values) > 0]
            if len(nz):
                N = max(N, float(nz.max()) + h.grid.dx)
    return {
        "l7": verify_l7(nu, A, B, lam, pairs, seed=seed),
        "c1": verify_c1(nu, b_edge, lam, pairs, seed=seed),
        "c2": verify_c2(nu, b_edge, N, pairs, seed=seed),
    }


# ---------------------------------------------------------------------------
# closed-form summation bounds


def lr_bound_check(variant, x, theta, a=None, eps=None, alpha=None, seed=None):
    """Check the two closed-form bounds on sums of x^(theta^k) weights.

    variant "a": sum_k x^(theta^k) e^{-a k}  vs  e^a/|ln th| Gamma(a/|ln th|) |ln x|^(-a/|ln th|)
    variant "b": sum_k x^(theta^k) k^(-1-eps) vs (4/eps) alpha^eps
                 e^{eps ln eps + eps + e/(alpha theta)} (ln(alpha |ln x| + e))^(-eps)

    The series is truncated once the analytic tail bound drops below
    1e-14 and the tail bound is added to the partial sum, so the
    reported lhs is an upper bound on the true sum.
    """
    if not 0 < x < 1 or not 0 < theta < 1:
        raise ValidationError("x and theta must lie in (0, 1)")
    lx = abs(math.log(x))

    if variant == "a":
        if a is None or a <= 0:
            raise ValidationError("variant (a) needs a > 0")
        K = max(8, int(math.ceil(math.log(1e14 / (1.0 - math.exp(-a))) / a)) + 1)
        k = np.arange(1, K + 1, dtype=float)
        terms = np.exp(theta**k * math.log(x) - a * k)
        tail = math.exp(-a * (K + 1)) / (1.0 - math.exp(-a))
        lhs = float(terms.sum() + tail)
        rhs = (
            math.exp(a)
            / abs(math.log(theta))
            * gamma(a / abs(math.log(theta)))
            * lx ** (-a / abs(math.log(theta)))
        )
        params = {"x": x, "theta": theta, "a": a, "K": K}
    elif variant == "b":
        if eps is None or eps <= 0 or alpha is None or alpha <= 0:
            raise ValidationError("variant (b) needs eps > 0 and alpha > 0")
        K = int(math.ceil((1.0 / (eps * 1e-14)) ** (1.0 / eps)))
        if K > 50_000_000:
            raise NumericRangeError(
                f"series truncation needs K={K} terms; raise eps to keep the tail below 1e-14"
            )
        lhs = 0.0
        chunk = 2_000_000
        for start in range(1, K + 1, chunk):
            k = np.arange(start, min(start + chunk, K + 1), dtype=float)
            lhs += float(np.exp(theta**k * math.log(x) - (1.0 + eps) * np.log(k)).sum())
        tail = K ** (-eps) / eps
        lhs += tail
        rhs = (
            4.0
            / eps
            * alpha**eps
            * math.exp(eps * math.log(eps) + eps + math.e / (alpha * theta))
            * math.log(alpha * lx + math.e) ** (-eps)
        )
        params = {"x": x, "theta": theta, "eps": eps, "alpha": alpha, "K": K}
    else:
        raise ValidationError("variant must be 'a' or 'b'")

    passed = lhs <= rhs
    meta = {
        "nu": None,
        "params": params,
        "seed": seed,
        "grid": {"n": 0, "x_max": 0.0},
        "flags": [],
        "tail_bound": tail,
    }
    return InequalityReport(
        name=f"lr_{variant}",
        lhs=lhs,
        rhs=rhs,
        constant=1.0,
        ratio=lhs / rhs if rhs > 0 else math.inf,
        passed=passed,
        metadata=meta,
    )
