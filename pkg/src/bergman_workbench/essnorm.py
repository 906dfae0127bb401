"""Boundary formulas for the essential norm of a t-mean of weighted composition
operators, the kernel-limit quantities that realize them numerically, and the
verdicts comparing the two.

The essential norm itself is never measured.  For an admissible family whose
boundary weights u_t(xi) have constant argument, the identified quantities
below all coincide with ||int S_t dt||_e = int ||S_t||_e dt; reports state
this hypothesis next to the numbers.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bergman import ComplexFunction, NormResult, TestKernel, bergman_norm, make_power_kernel, make_two_point_kernel
from .operators import INFINITE, SymbolFamily, SymbolPair, apply_integral_operator, apply_weighted_composition
from .quadrature import QuadratureSpec, _ts, integrate_disk, integrate_interval, tanh_sinh_rule
from .special import SpaceParams

__all__ = [
    "HYPOTHESIS",
    "Quantity",
    "CurveSample",
    "ThetaVector",
    "EssNormReport",
    "TwoDirectionReport",
    "default_c_schedule",
    "formula_absolute",
    "formula_signed",
    "kernel_limit_curves",
    "extrapolate_limit",
    "operator_kernel_limit",
    "preimage_sum",
    "two_direction_weights",
    "theta_vector",
    "collinearity_verdict",
    "two_direction_quantities",
    "interchange_report",
]

HYPOTHESIS = (
    "The four numbers are the identified quantities of the interchange theorem; they equal "
    "the essential norm only if the family is admissible and Arg u_t(xi) is constant in t. "
    "Sampling cannot certify either hypothesis."
)

VERDICTS = ("interchange_equality", "strict_inequality", "inconclusive")

# t-integral and disk tolerances used for the kernel-limit curves; the verdict
# tolerance is 2%, so these are far below the decision threshold
# shells closer than 2^-28 to the contact point only add rounding noise of
# phi_t; the Aitken tail of the disk rule covers them
CURVE_DISK_SPEC = QuadratureSpec(rel_tol=1e-4, max_levels=28)
CURVE_T_SPEC = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-12)
CURVE_RHS_SPEC = QuadratureSpec(rel_tol=1e-5, base_order=8)
# a curve sample counts as converged when its disk error plus the propagated
# t-quadrature error stays below this share of the value
LHS_REL_TOL = 1e-3


@dataclass(frozen=True)
class Quantity:
    value: float
    error: float
    converged: bool

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {"value": self.value, "error": self.error, "converged": self.converged}


def default_c_schedule(space: SpaceParams, n: int = 6, delta: float = 0.4) -> list:
    """c_k = c* (1 - delta 2^-k), k = 0 .. n-1."""
    cs = space.critical_exponent
    return [cs * (1.0 - delta * 2.0 ** (-k)) for k in range(n)]


def _check_schedule(c_schedule, space: SpaceParams):
    cs = space.critical_exponent
    c_schedule = [float(c) for c in c_schedule]
    if not c_schedule:
        raise ValueError("empty c-schedule")
    if any(not 0 < c < cs for c in c_schedule):
        raise ValueError(f"every c must lie in (0, {cs})")
    if any(b <= a for a, b in zip(c_schedule, c_schedule[1:])):
        raise ValueError("c-schedule must be strictly increasing")
    return c_schedule


# --------------------------------------------------------------------------
# boundary formulas


def _boundary_ratio(family: SymbolFamily, t: float, xi: complex, exponent: float) -> complex:
    """u_t(xi) / phi_t'(xi)^exponent, zero for an infinite angular derivative."""
    u, dphi = family.boundary_data(t, xi)
    if dphi == INFINITE:
        return 0j
    dphi = complex(dphi)
    if abs(dphi.imag) <= 1e-12 * abs(dphi):
        return complex(u) * dphi.real ** (-exponent)
    return complex(u) * dphi ** (-exponent)


# nodes with 1 - t below this are not sampled; a power law fitted on the two
# nearest sampled nodes stands in for them (t = 1 - s loses s to rounding)
_RIGHT_CUTOFF = 1e-10


def _power_fit(t1, g1, t2, g2):
    """A s^-gamma through (1 - t1, g1) and (1 - t2, g2); None if not integrable."""
    if g1 == 0 or g2 == 0:
        return lambda s: 0j
    s1, s2 = 1.0 - t1, 1.0 - t2
    gam = -math.log(abs(g1 / g2)) / math.log(s1 / s2)
    if gam >= 1:
        return None
    amp = g1 * s1 ** gam
    return lambda s: amp * s ** (-gam)


def _t_integral(g, spec: QuadratureSpec | None, max_level: int = 8) -> Quantity:
    """int_0^1 g(t) dt by tanh-sinh, with the t -> 1 tail modelled as A s^-gamma."""
    spec = spec or QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13)
    cache: dict = {}

    def value(t):
        v = cache.get(t)
        if v is None:
            v = cache[t] = complex(g(t))
            if not np.isfinite(v):
                raise ArithmeticError(f"boundary integrand not finite at t={t}")
        return v

    prev = None
    result = Quantity(math.nan, math.inf, False)
    for level in range(3, max_level + 1):
        nodes, w, d_left, d_right = tanh_sinh_rule(level, 1e-200)
        _, _, _, idx = _ts(level, 1e-200)
        coarse = (idx % 2) == 0
        w = 0.5 * w
        fine = crude = 0j
        tail_w, tail_s, tail_c = [], [], []
        near = []
        try:
            for k in range(nodes.size):
                if d_left[k] <= d_right[k]:
                    t = 0.5 * d_left[k]
                    if t <= 0:
                        continue
                else:
                    s = 0.5 * d_right[k]
                    if s < _RIGHT_CUTOFF:
                        tail_w.append(w[k])
                        tail_s.append(s)
                        tail_c.append(coarse[k])
                        continue
                    t = 1.0 - s
                    near.append((s, t))
                v = value(t)
                fine += w[k] * v
                if coarse[k]:
                    crude += 2.0 * w[k] * v
            tail = tail_crude = 0j
            tail_err = 0.0
            if tail_w:
                nearest = sorted(near)[:3]
                gvals = [value(t) for _, t in nearest]
                fit = _power_fit(nearest[0][1], gvals[0], nearest[1][1], gvals[1])
                if fit is None:
                    return Quantity(math.inf, math.inf, False)
                alt = _power_fit(nearest[1][1], gvals[1], nearest[2][1], gvals[2])
                for wk, sk, ck in zip(tail_w, tail_s, tail_c):
                    tk = wk * fit(sk)
                    tail += tk
                    if ck:
                        tail_crude += 2.0 * tk
                    if alt is not None:
                        tail_err += abs(tk - wk * alt(sk))
        except ArithmeticError:
            return Quantity(math.inf, math.inf, False)
        total = fine + tail
        err = abs(total - (crude + tail_crude))
        if prev is not None:
            err = max(abs(total - prev), 1e-3 * err)
        err = float(err + tail_err)
        result = Quantity(complex(total), err, bool(err <= max(spec.abs_tol, spec.rel_tol * abs(total))))
        if result.converged and prev is not None:
            return result
        prev = total
    return result


def formula_absolute(family: SymbolFamily, xi, space: SpaceParams, spec: QuadratureSpec | None = None) -> Quantity:
    """int_0^1 |u_t(xi)| / phi_t'(xi)^c* dt with c* = (2+alpha)/p."""
    xi = complex(xi)
    cs = space.critical_exponent
    res = _t_integral(lambda t: abs(_boundary_ratio(family, t, xi, cs)), spec)
    return Quantity(float(np.real(res.value)), res.error, res.converged)


def formula_signed(family: SymbolFamily, xi, space: SpaceParams, spec: QuadratureSpec | None = None) -> Quantity:
    """|int_0^1 u_t(xi) / phi_t'(xi)^c* dt|."""
    xi = complex(xi)
    cs = space.critical_exponent
    res = _t_integral(lambda t: _boundary_ratio(family, t, xi, cs), spec)
    return Quantity(float(abs(res.value)), res.error, res.converged)


# --------------------------------------------------------------------------
# kernel limits


@dataclass(frozen=True)
class CurveSample:
    """lhs = ||int S_t f_c dt|| and rhs = int ||S_t f_c|| dt at one kernel order c."""

    c: float
    lhs: float
    lhs_error: float
    lhs_converged: bool
    rhs: float
    rhs_error: float
    rhs_converged: bool
    t_diagnostics: dict = field(default_factory=dict)
    inner_unconverged: int = 0

    @property
    def converged(self) -> bool:
        return self.lhs_converged and self.rhs_converged

    @property
    def minkowski_ok(self) -> bool:
        return self.lhs <= self.rhs + self.lhs_error + self.rhs_error + 1e-12 * abs(self.rhs)

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "lhs": self.lhs,
            "lhs_error": self.lhs_error,
            "lhs_converged": self.lhs_converged,
            "rhs": self.rhs,
            "rhs_error": self.rhs_error,
            "rhs_converged": self.rhs_converged,
            "minkowski_ok": self.minkowski_ok,
            "t_diagnostics": self.t_diagnostics,
            "inner_unconverged": self.inner_unconverged,
        }


def _mean_norm(mean: ComplexFunction, space: SpaceParams, spec: QuadratureSpec) -> tuple:
    """Norm of the t-integrated image and the part of its error due to the t-quadrature.

    The t-errors e(z) enter as d||g|| = int p |g|^(p-1) e dA / (p ||g||^(p-1)),
    integrated on the same grid as ||g||^p itself.
    """
    p = space.p
    spec = spec.with_singularities(sorted(mean.singularities, key=cmath.phase))
    if mean.singular_order is not None:
        spec = replace(spec, blowup_order=p * mean.singular_order)

    def integrand(z):
        g, e = mean.evaluate(z, with_error=True)
        g = np.abs(g)
        return np.stack([g ** p, p * g ** (p - 1.0) * e], axis=-1)

    res = integrate_disk(integrand, space.alpha, spec)
    mass = max(float(np.real(res.value[0])), 0.0)
    value = mass ** (1.0 / p)
    if mass > 0:
        err = value / (p * mass) * res.error_estimate
        t_err = value / (p * mass) * abs(float(np.real(res.value[1])))
    else:
        err, t_err = res.error_estimate ** (1.0 / p), 0.0
    return NormResult(value, err, res.converged, res.cells_used), t_err


def _curve_sample(family, kernel: TestKernel, space, disk_spec, t_spec, rhs_spec) -> CurveSample:
    f = kernel.function
    mean = apply_integral_operator(family, f, t_spec, max_level=6)
    lhs, t_err = _mean_norm(mean, space, disk_spec)
    diag = mean.diagnostics
    share = diag.unconverged_points / max(diag.evaluations, 1)
    lhs_err = lhs.error_estimate + t_err
    lhs_ok = lhs_err <= LHS_REL_TOL * lhs.value

    bad = [0]

    def norms(ts):
        out = []
        for t in np.atleast_1d(ts):
            r = bergman_norm(apply_weighted_composition(family.at(float(t)), f), space, disk_spec)
            bad[0] += not r.converged
            out.append(r.value)
        return np.array(out)

    rhs = integrate_interval(norms, 0.0, 1.0, (True, True), rhs_spec, method="graded")
    return CurveSample(
        kernel.c,
        lhs.value,
        lhs_err,
        lhs_ok,
        float(np.real(rhs.value)),
        rhs.error_estimate,
        rhs.converged and bad[0] == 0,
        dict(diag.to_dict(), unconverged_share=share),
        bad[0],
    )


def kernel_limit_curves(
    family: SymbolFamily,
    xi,
    space: SpaceParams,
    c_schedule=None,
    disk_spec: QuadratureSpec | None = None,
    t_spec: QuadratureSpec | None = None,
    rhs_spec: QuadratureSpec | None = None,
    kernel=None,
) -> list:
    """(c, lhs, rhs) samples for f_{c,xi} along the c-schedule.

    ``kernel(c)`` may replace the power kernel (the two-direction checks pass
    the two-point kernel).  A sample whose inner quadratures did not converge
    is kept and flagged.
    """
    schedule = _check_schedule(c_schedule if c_schedule is not None else default_c_schedule(space), space)
    disk_spec = disk_spec or CURVE_DISK_SPEC
    t_spec = t_spec or CURVE_T_SPEC
    rhs_spec = rhs_spec or CURVE_RHS_SPEC
    make = kernel or (lambda c: make_power_kernel(c, xi, space))
    return [_curve_sample(family, make(c), space, disk_spec, t_spec, rhs_spec) for c in schedule]


def extrapolate_limit(samples, c_star: float | None = None) -> tuple:
    """Aitken delta-squared limit of the values of ``samples`` [(c, value), ...].

    Returns (estimate, diagnostic) with diagnostic = |last accelerated - last raw|.
    A tail that is not monotone with contracting steps gets the last step
    added to the diagnostic.
    """
    pts = [(float(c), float(v)) for c, v in samples]
    if len(pts) < 3:
        raise ValueError("extrapolation needs at least 3 samples")
    if c_star is not None and any(c >= c_star for c, _ in pts):
        raise ValueError("samples must have c < c*")
    v = np.array([val for _, val in pts])
    d = np.diff(v)
    acc = []
    for k in range(2, len(v)):
        den = d[k - 1] - d[k - 2]
        if den == 0 or d[k - 1] == 0:
            acc.append(v[k])
        else:
            acc.append(v[k] - d[k - 1] ** 2 / den)
    estimate = float(acc[-1])
    diagnostic = abs(estimate - v[-1])
    regular = d[-1] * d[-2] > 0 and abs(d[-1]) < abs(d[-2])
    if not regular and (d[-1] != 0 or d[-2] != 0):
        diagnostic += abs(d[-1])
    if not math.isfinite(estimate):
        estimate, diagnostic = float(v[-1]), math.inf
    return estimate, diagnostic


def operator_kernel_limit(
    sym: SymbolPair,
    xi,
    space: SpaceParams,
    c_schedule=None,
    power: float = 1.0,
    disk_spec: QuadratureSpec | None = None,
) -> dict:
    """Extrapolated lim_c ||S f_{c,xi}||^power for a single operator S = u C_phi."""
    schedule = _check_schedule(c_schedule if c_schedule is not None else default_c_schedule(space), space)
    disk_spec = disk_spec or CURVE_DISK_SPEC
    rows = []
    for c in schedule:
        f = make_power_kernel(c, xi, space)
        r = bergman_norm(apply_weighted_composition(sym, f.function), space, disk_spec)
        value = r.value ** power
        rows.append({"c": c, "value": value, "error": power * r.value ** (power - 1) * r.error_estimate, "converged": r.converged})
    estimate, diagnostic = extrapolate_limit([(r["c"], r["value"]) for r in rows], space.critical_exponent)
    return {"estimate": estimate, "diagnostic": diagnostic, "samples": rows}


def preimage_sum(sym: SymbolPair, xi, preimages, space: SpaceParams) -> float:
    """sum over zeta in phi^-1(xi) of |u(zeta)|^p / |phi'(zeta)|^(2+alpha)."""
    xi = complex(xi)
    total = 0.0
    for zeta in preimages:
        zeta = complex(zeta)
        image = complex(sym.phi.evaluate(np.asarray(zeta)))
        if not abs(image - xi) < 1e-8:
            raise ValueError(f"supplied preimage {zeta} maps to {image}, not to {xi}")
        dphi = complex(sym.phi.derivative(np.asarray(zeta)))
        if dphi == 0:
            raise ValueError(f"phi'({zeta}) = 0")
        u = complex(sym.u.evaluate(np.asarray(zeta)))
        total += abs(u) ** space.p / abs(dphi) ** (2.0 + space.alpha)
    return total


# --------------------------------------------------------------------------
# two directions


EXPONENT_MODES = ("paper_2_over_p", "full_2plusalpha_over_p")


def two_direction_weights(theta: float, p: float) -> tuple:
    """(w_plus, w_minus): limiting shares of ||g_{c,theta}||^p at 1 and at -1.

    theta multiplies (1+z)^-c, whose mass sits at -1, so the share at 1 is
    (1-theta)^p / (theta^p + (1-theta)^p).
    """
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    a, b = (1.0 - theta) ** p, theta ** p
    return a / (a + b), b / (a + b)


@dataclass(frozen=True)
class ThetaVector:
    at_minus: complex
    at_plus: complex
    t: float
    exponent_mode: str = "paper_2_over_p"

    def __post_init__(self):
        if self.exponent_mode not in EXPONENT_MODES:
            raise ValueError(f"unknown exponent mode {self.exponent_mode!r}")
        if not (np.isfinite(self.at_minus) and np.isfinite(self.at_plus)):
            raise ValueError("Theta components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.at_minus, self.at_plus], dtype=complex)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "at_minus": [complex(self.at_minus).real, complex(self.at_minus).imag],
            "at_plus": [complex(self.at_plus).real, complex(self.at_plus).imag],
            "exponent_mode": self.exponent_mode,
        }


def theta_vector(family: SymbolFamily, t: float, theta: float, space: SpaceParams, exponent_mode: str = "paper_2_over_p") -> ThetaVector:
    exponent = 2.0 / space.p if exponent_mode == "paper_2_over_p" else space.critical_exponent
    if exponent_mode not in EXPONENT_MODES:
        raise ValueError(f"unknown exponent mode {exponent_mode!r}")
    w_plus, w_minus = two_direction_weights(theta, space.p)
    plus = w_plus ** (1.0 / space.p) * _boundary_ratio(family, t, 1 + 0j, exponent)
    minus = w_minus ** (1.0 / space.p) * _boundary_ratio(family, t, -1 + 0j, exponent)
    return ThetaVector(minus, plus, float(t), exponent_mode)


def collinearity_verdict(thetas, tol: float = 1e-8) -> str:
    """equality_expected if every Theta_t is a nonnegative multiple of one reference sample."""
    thetas = list(thetas)
    if len(thetas) < 2:
        raise ValueError("collinearity needs at least two samples")
    vecs = [th.as_array() for th in thetas]
    norms = [float(np.linalg.norm(v)) for v in vecs]
    scale = max(norms)
    if scale == 0:
        return "degenerate"
    ref = vecs[int(np.argmax(norms))] / scale
    for v in vecs:
        v = v / scale
        lam = np.vdot(ref, v) / np.vdot(ref, ref)
        if abs(lam.imag) > tol or lam.real < -tol or np.linalg.norm(v - lam.real * ref) > tol:
            return "strict_inequality_expected"
    return "equality_expected"


@dataclass(frozen=True)
class TwoDirectionReport:
    label: str
    theta: float
    space: dict
    w_plus: float
    w_minus: float
    closed_lhs: float
    closed_rhs: float
    gap: float
    ratio: float
    numerical_lhs: float | None
    numerical_lhs_diagnostic: float | None
    numerical_rhs: float | None
    numerical_rhs_diagnostic: float | None
    c_samples: tuple
    thetas: dict
    collinearity: dict
    closed_form_error: float

    @property
    def numerics_consistent(self) -> bool:
        if self.numerical_lhs is None:
            return True
        return _rel(self.numerical_lhs, self.closed_lhs) <= 0.03 and _rel(self.numerical_rhs, self.closed_rhs) <= 0.03

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "label", "theta", "space", "w_plus", "w_minus", "closed_lhs", "closed_rhs", "gap", "ratio",
            "closed_form_error", "numerical_lhs", "numerical_lhs_diagnostic", "numerical_rhs",
            "numerical_rhs_diagnostic", "collinearity")}
        d["c_samples"] = [s.to_dict() for s in self.c_samples]
        d["thetas"] = {mode: [th.to_dict() for th in ths] for mode, ths in self.thetas.items()}
        d["numerics_consistent"] = self.numerics_consistent
        return d


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def two_direction_quantities(
    family: SymbolFamily,
    theta: float,
    space: SpaceParams,
    c_schedule=None,
    numerical: bool = True,
    t_samples: int = 9,
    disk_spec: QuadratureSpec | None = None,
) -> TwoDirectionReport:
    """Closed forms of lim_c ||int S_t g_{c,theta} dt|| and lim_c int ||S_t g_{c,theta}|| dt.

    With numerical=True both limits are also extrapolated from g_{c,theta} curves.
    """
    dirs = sorted(complex(x).real for x in family.directions)
    if len(dirs) != 2 or abs(dirs[0] + 1) > 1e-12 or abs(dirs[1] - 1) > 1e-12:
        raise ValueError("two-direction quantities need the directions -1 and 1")
    p = space.p
    cs = space.critical_exponent
    w_plus, w_minus = two_direction_weights(theta, p)
    i_plus = _t_integral(lambda t: _boundary_ratio(family, t, 1 + 0j, cs), None)
    i_minus = _t_integral(lambda t: _boundary_ratio(family, t, -1 + 0j, cs), None)
    closed_lhs = (w_plus * abs(i_plus.value) ** p + w_minus * abs(i_minus.value) ** p) ** (1.0 / p)

    def pointwise(t):
        a = abs(_boundary_ratio(family, t, 1 + 0j, cs))
        b = abs(_boundary_ratio(family, t, -1 + 0j, cs))
        return (w_plus * a ** p + w_minus * b ** p) ** (1.0 / p)

    rhs_q = _t_integral(pointwise, None)
    closed_rhs = float(np.real(rhs_q.value))
    err = i_plus.error + i_minus.error + rhs_q.error

    ts = [0.5 - 0.5 * math.cos(math.pi * (k + 0.5) / t_samples) for k in range(t_samples)]
    thetas = {mode: [theta_vector(family, t, theta, space, mode) for t in ts] for mode in EXPONENT_MODES}
    verdicts = {mode: collinearity_verdict(v) for mode, v in thetas.items()}

    samples = ()
    n_lhs = n_lhs_d = n_rhs = n_rhs_d = None
    if numerical:
        schedule = _check_schedule(c_schedule if c_schedule is not None else default_c_schedule(space), space)
        disk_spec = disk_spec or CURVE_DISK_SPEC

        def kernel(c):
            return make_two_point_kernel(c, theta, space, replace(disk_spec, rel_tol=1e-10))

        samples = tuple(kernel_limit_curves(family, 1, space, schedule, disk_spec, kernel=kernel))
        n_lhs, n_lhs_d = extrapolate_limit([(s.c, s.lhs) for s in samples], cs)
        n_rhs, n_rhs_d = extrapolate_limit([(s.c, s.rhs) for s in samples], cs)

    return TwoDirectionReport(
        family.label,
        float(theta),
        space.to_dict(),
        w_plus,
        w_minus,
        closed_lhs,
        closed_rhs,
        closed_rhs - closed_lhs,
        closed_lhs / closed_rhs if closed_rhs else math.nan,
        n_lhs,
        n_lhs_d,
        n_rhs,
        n_rhs_d,
        samples,
        thetas,
        verdicts,
        err,
    )


# --------------------------------------------------------------------------
# interchange report


@dataclass(frozen=True)
class EssNormReport:
    family: dict
    space: dict
    xi: complex
    c_schedule: tuple
    formula_absolute: Quantity
    formula_signed: Quantity
    lhs_limit: float
    lhs_diagnostic: float
    rhs_limit: float
    rhs_diagnostic: float
    c_samples: tuple
    verdict: str
    tolerance: float
    closed_form: float | None = None
    hypothesis: str = HYPOTHESIS

    @property
    def quantities(self) -> dict:
        return {
            "formula_absolute": self.formula_absolute.value,
            "formula_signed": self.formula_signed.value,
            "lhs_limit": self.lhs_limit,
            "rhs_limit": self.rhs_limit,
        }

    @property
    def converged(self) -> bool:
        return self.formula_absolute.converged and self.formula_signed.converged and all(s.converged for s in self.c_samples)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "space": self.space,
            "xi": [self.xi.real, self.xi.imag],
            "c_schedule": list(self.c_schedule),
            "formula_absolute": self.formula_absolute.to_dict(),
            "formula_signed": self.formula_signed.to_dict(),
            "lhs_limit": {"value": self.lhs_limit, "diagnostic": self.lhs_diagnostic},
            "rhs_limit": {"value": self.rhs_limit, "diagnostic": self.rhs_diagnostic},
            "c_samples": [s.to_dict() for s in self.c_samples],
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "closed_form": self.closed_form,
            "converged": self.converged,
            "hypothesis": self.hypothesis,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _verdict(fa: Quantity, fs: Quantity, lhs, lhs_d, rhs, rhs_d, samples) -> tuple:
    diag = max(lhs_d, rhs_d)
    tol = max(0.02 * abs(fa.value), 3.0 * diag)
    if not fa.converged or not fs.converged or not math.isfinite(fa.value):
        return "inconclusive", tol
    values = [fa.value, fs.value, lhs, rhs]
    if all(s.converged for s in samples) and max(values) - min(values) <= tol:
        return "interchange_equality", tol
    if fa.value - fs.value > max(0.02 * abs(fa.value), fa.error + fs.error):
        return "strict_inequality", tol
    return "inconclusive", tol


def interchange_report(
    family: SymbolFamily,
    xi,
    space: SpaceParams,
    c_schedule=None,
    closed_form: float | None = None,
    disk_spec: QuadratureSpec | None = None,
    t_spec: QuadratureSpec | None = None,
) -> EssNormReport:
    """All four identified quantities with their verdict.

    interchange_equality: the four agree within max(2%, 3 x extrapolation diagnostic).
    strict_inequality: formula_signed falls short of formula_absolute by more than 2%.
    """
    xi = complex(xi)
    schedule = _check_schedule(c_schedule if c_schedule is not None else default_c_schedule(space), space)
    fa = formula_absolute(family, xi, space)
    fs = formula_signed(family, xi, space)
    samples = tuple(kernel_limit_curves(family, xi, space, schedule, disk_spec, t_spec))
    cs = space.critical_exponent
    if len(samples) >= 3:
        lhs, lhs_d = extrapolate_limit([(s.c, s.lhs) for s in samples], cs)
        rhs, rhs_d = extrapolate_limit([(s.c, s.rhs) for s in samples], cs)
    else:
        lhs, lhs_d = samples[-1].lhs, math.inf
        rhs, rhs_d = samples[-1].rhs, math.inf
    verdict, tol = _verdict(fa, fs, lhs, lhs_d, rhs, rhs_d, samples)
    return EssNormReport(
        family.to_dict(),
        space.to_dict(),
        xi,
        tuple(schedule),
        fa,
        fs,
        lhs,
        lhs_d,
        rhs,
        rhs_d,
        samples,
        verdict,
        tol,
        closed_form,
    )
