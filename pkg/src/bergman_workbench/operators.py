"""Weighted composition operators S_t = u_t C_{phi_t} and their t-means."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bergman import ComplexFunction
from .dsl import compile_expression
from .quadrature import QuadratureSpec, _ts_nested, gauss_legendre_rule
from .special import SpaceParams

__all__ = [
    "INFINITE",
    "SelfMapError",
    "SymbolPair",
    "SymbolFamily",
    "TIntegralDiagnostics",
    "apply_weighted_composition",
    "apply_integral_operator",
    "hilbert_family",
    "volterra_family",
    "volterra_direct",
    "square_family",
    "cubic_two_direction_family",
    "phase_family",
    "constant_family",
    "evaluation_family",
    "dsl_family",
    "family_from_dict",
    "radial_limit",
]

# marker for an infinite angular derivative (compact member)
INFINITE = math.inf


class SelfMapError(ValueError):
    """phi left the open unit disk at an interior sample point."""


def _fn(ev, deriv=None, label=""):
    return ComplexFunction(ev, deriv, frozenset(), label)


@dataclass(frozen=True)
class SymbolPair:
    """The data (u, phi, phi') of one operator u C_phi plus its boundary values.

    ``boundary_values`` maps a direction xi to ``(u(xi), phi'(xi))``; an
    infinite ``phi'(xi)`` marks a member whose image stays away from xi.
    ``preimages`` maps xi to the boundary points zeta with phi(zeta) = xi.
    """

    u: ComplexFunction
    phi: ComplexFunction
    boundary_values: dict = field(default_factory=dict)
    preimages: dict = field(default_factory=dict)
    numerical: bool = False

    def __post_init__(self):
        if self.phi.derivative is None:
            raise ValueError("phi must carry its derivative")
        for xi, (_, dphi) in self.boundary_values.items():
            if dphi != INFINITE and not complex(dphi).real > 0:
                raise ValueError(f"angular derivative at {xi} must have positive real part, got {dphi}")

    @property
    def contact_points(self) -> frozenset:
        pts = set()
        for xi, (_, dphi) in self.boundary_values.items():
            if dphi != INFINITE:
                pts.update(self.preimages.get(xi, [xi]))
        return frozenset(complex(z) for z in pts)


@dataclass(frozen=True)
class SymbolFamily:
    """t -> SymbolPair on (0, 1) with shared directions.

    ``boundary(t, xi)`` returns ``(u_t(xi), phi_t'(xi))`` without building the
    pair; ``norm_bound(t, space)`` is an optional integrable upper bound for
    the operator norm of S_t.
    """

    at: Callable
    directions: tuple
    label: str
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    expressions: dict = field(default_factory=dict)
    norm_bound: Callable | None = None
    boundary: Callable | None = None
    warnings: tuple = ()

    def boundary_data(self, t: float, xi) -> tuple:
        xi = complex(xi)
        if self.boundary is not None:
            return self.boundary(t, xi)
        return _lookup(self.at(t).boundary_values, xi)

    def contact_points(self, t: float = 0.5) -> frozenset:
        return self.at(t).contact_points

    def to_dict(self) -> dict:
        params = {}
        for k, v in self.params.items():
            if isinstance(v, complex):
                v = [v.real, v.imag]
            elif callable(v):
                v = getattr(v, "__name__", repr(v))
            params[k] = v
        return {
            "label": self.label,
            "kind": self.kind,
            "parameters": params,
            "expressions": dict(self.expressions),
            "directions": [[complex(x).real, complex(x).imag] for x in self.directions],
            "warnings": list(self.warnings),
        }


def _lookup(table: dict, xi: complex):
    for key, val in table.items():
        if abs(complex(key) - xi) < 1e-12:
            return val
    raise KeyError(f"no boundary data at direction {xi}")


# --------------------------------------------------------------------------
# applying operators


def _contact_array(points) -> np.ndarray:
    return np.array(sorted(points, key=cmath.phase), dtype=complex)


def _drop_rounded(val, bad, w, targets, diag):
    """Zero samples where phi(z) rounded onto (or past) a direction xi.

    A self-map only reaches the circle through rounding, so flagged samples
    with |phi(z) - xi| < 1e-12 are dropped and counted; anything else stays
    as it is and a non-finite value makes the quadrature report it.
    """
    if targets.size == 0:
        return val
    ww = np.broadcast_to(np.asarray(w, dtype=complex), np.shape(val))
    rounded = bad & (np.min(np.abs(ww[..., None] - targets), axis=-1) < 1e-12)
    if np.any(rounded):
        diag.rounded_points += int(np.count_nonzero(rounded))
        val = np.where(rounded, 0.0, val)
    return val


def apply_weighted_composition(sym: SymbolPair, f: ComplexFunction, tol: float = 0.0) -> ComplexFunction:
    """z -> u(z) f(phi(z)).

    Raises SelfMapError when |phi(z)| >= 1 + tol at an interior sample point,
    except within 1e-6 of a contact point or when phi(z) is within 1e-9 of a
    direction: there rounding alone can put phi(z) on the circle.
    """
    targets = _contact_array(sym.boundary_values)
    contacts = _contact_array(sym.contact_points)
    diag = TIntegralDiagnostics()

    def ev(z):
        w = sym.phi.evaluate(z)
        bad = np.abs(w) >= 1.0 + tol
        if np.any(bad):
            wb = np.atleast_1d(w)[np.atleast_1d(bad)]
            zb = np.broadcast_to(np.asarray(z, dtype=complex), np.shape(w))
            zb = np.atleast_1d(zb)[np.atleast_1d(bad)]
            # near a contact point the grid itself sits within rounding of the circle
            keep = np.abs(zb) < 1.0
            if targets.size:
                keep &= np.min(np.abs(wb[:, None] - targets[None, :]), axis=1) >= 1e-9
            if contacts.size:
                keep &= np.min(np.abs(zb[:, None] - contacts[None, :]), axis=1) >= 1e-6
            zb = zb[keep]
            if zb.size:
                raise SelfMapError(f"|phi(z)| >= 1 at interior point z = {complex(zb[0])!r}")
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = sym.u.evaluate(z) * f.evaluate(w)
        bad = ~np.isfinite(val) | (np.abs(w) >= 1.0)
        if np.any(bad):
            val = _drop_rounded(val, bad, w, targets, diag)
        return val

    deriv = None
    if sym.u.derivative is not None and f.derivative is not None:
        def deriv(z):
            w = sym.phi.evaluate(z)
            return sym.u.derivative(z) * f.evaluate(w) + sym.u.evaluate(z) * f.derivative(w) * sym.phi.derivative(z)

    sing = sym.contact_points if f.singularities else frozenset()
    order = f.singular_order if sing else None
    return ComplexFunction(ev, deriv, sing, f"u*({f.label} o phi)", diagnostics=diag, singular_order=order)


@dataclass
class TIntegralDiagnostics:
    """Running error tally of a t-integrated operator image."""

    evaluations: int = 0
    max_error: float = 0.0
    max_relative_error: float = 0.0
    unconverged_points: int = 0
    rounded_points: int = 0

    @property
    def converged(self) -> bool:
        return self.unconverged_points == 0

    def to_dict(self) -> dict:
        return {
            "evaluations": self.evaluations,
            "max_error": self.max_error,
            "max_relative_error": self.max_relative_error,
            "unconverged_points": self.unconverged_points,
            "rounded_points": self.rounded_points,
        }


def apply_integral_operator(
    family: SymbolFamily,
    f: ComplexFunction,
    t_spec: QuadratureSpec | None = None,
    start_level: int = 4,
    max_level: int = 7,
) -> ComplexFunction:
    """z -> int_0^1 u_t(z) f(phi_t(z)) dt by tanh-sinh in t, vectorized over z.

    Nodes closer than 1e-15 to an endpoint are dropped so that t never rounds
    to 0 or 1.  Per-point errors come from the nested coarse rule and are
    collected in ``result.diagnostics``; ``result.evaluate(z, with_error=True)``
    also returns them.
    """
    spec = t_spec or QuadratureSpec(rel_tol=1e-9, abs_tol=1e-13)
    diag = TIntegralDiagnostics()
    targets = _contact_array(family.directions)
    cache: dict = {}

    def pair(t):
        p = cache.get(t)
        if p is None:
            p = cache[t] = family.at(t)
        return p

    def integrand(t, z):
        p = pair(t)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            w = p.phi.evaluate(z)
            val = p.u.evaluate(z) * f.evaluate(w)
        bad = ~np.isfinite(val) | (np.abs(w) >= 1.0)
        if np.any(bad):
            val = _drop_rounded(val, bad, w, targets, diag)
        return val

    def ev(z, with_error=False):
        z = np.asarray(z, dtype=complex)
        shape = z.shape
        zf = z.ravel()
        fine = np.zeros(zf.shape, dtype=complex)
        err = np.zeros(zf.shape)
        tol = np.zeros(zf.shape)
        active = np.arange(zf.size)
        # values at a node are stored for the points active when it was first
        # needed; later levels only ever need a subset of those points
        seen: dict = {}
        for level in range(start_level, max_level + 1):
            if active.size == 0:
                break
            d_left, _, w, coarse = _ts_nested(level, 2e-15)
            ts = 0.5 * d_left
            za = zf[active]
            f_sum = np.zeros(active.size, dtype=complex)
            c_sum = np.zeros(active.size, dtype=complex)
            for t, wt, is_coarse in zip(ts, w, coarse):
                t = float(t)
                hit = seen.get(t)
                if hit is None:
                    val = integrand(t, za)
                    seen[t] = (active, val)
                else:
                    idx, full = hit
                    val = full if idx.size == active.size else full[np.searchsorted(idx, active)]
                f_sum += wt * val
                if is_coarse:
                    c_sum += wt * val
            f_sum *= 0.5
            c_sum *= 1.0  # 0.5 times twice the coarse step
            e = np.abs(f_sum - c_sum)
            tl = np.maximum(spec.abs_tol, spec.rel_tol * np.abs(f_sum))
            fine[active] = f_sum
            err[active] = e
            tol[active] = tl
            active = active[e > tl]
        diag.evaluations += zf.size
        if zf.size:
            diag.max_error = max(diag.max_error, float(np.max(err)))
            diag.max_relative_error = max(diag.max_relative_error, float(np.max(err / np.maximum(np.abs(fine), 1e-300))))
            diag.unconverged_points += int(np.count_nonzero(err > tol))
        out = fine.reshape(shape)
        if with_error:
            return (out, err.reshape(shape)) if shape else (complex(out), float(err[0]))
        return out if shape else complex(out)

    sing = family.contact_points() if f.singularities else frozenset()
    order = f.singular_order if sing else None
    return ComplexFunction(ev, None, sing, f"int_0^1 S_t({f.label}) dt", diagnostics=diag, singular_order=order)


# --------------------------------------------------------------------------
# built-in families


def hilbert_family(lam: float = 1.0) -> SymbolFamily:
    """u_t(z) = t^(lam-1) / (1-(1-t)z)^lam, phi_t(z) = t / (1-(1-t)z), direction 1.

    The mean of this family is f -> int_0^1 f(t) t^(lam-1) / (1 - t z) dt.
    """
    lam = float(lam)
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")

    def at(t):
        s = 1.0 - t

        def u(z):
            return t ** (lam - 1.0) * np.exp(-lam * np.log(1.0 - s * z))

        def du(z):
            return lam * s * t ** (lam - 1.0) * np.exp(-(lam + 1.0) * np.log(1.0 - s * z))

        def phi(z):
            return t / (1.0 - s * z)

        def dphi(z):
            return t * s / (1.0 - s * z) ** 2

        return SymbolPair(_fn(u, du, "u_t"), _fn(phi, dphi, "phi_t"), {1 + 0j: (1.0 / t, s / t)}, {1 + 0j: [1 + 0j]})

    def boundary(t, xi):
        if abs(xi - 1) > 1e-12:
            raise KeyError(f"no boundary data at direction {xi}")
        return 1.0 / t, (1.0 - t) / t

    def norm_bound(t, space: SpaceParams):
        # change of variables w = phi_t(z) gives ||S_t||^p <= t^(2-p) (1-t)^-(2+a) (1+t)^a
        # whenever lam p >= 4 (so |w|^(lam p - 4) <= 1 on the image disk)
        if lam * space.p < 4:
            return None
        return t ** (2.0 / space.p - 1.0) * (1.0 - t) ** (-space.critical_exponent) * (1.0 + t) ** (space.alpha / space.p)

    return SymbolFamily(
        at,
        (1 + 0j,),
        f"hilbert(lambda={lam:g})",
        "hilbert",
        {"lambda": lam},
        {"u": "t^(l-1)/(1-(1-t)*z)^l", "phi": "t/(1-(1-t)*z)", "bindings": {"l": lam}},
        norm_bound,
        boundary,
    )


def _unit_phase(value: complex) -> complex:
    value = complex(value)
    return value.conjugate() / abs(value) if value != 0 else 1 + 0j


def volterra_family(g_prime: ComplexFunction, boundary_limit: complex | None) -> SymbolFamily:
    """Family whose mean is V_g f(z) = int_0^z f(w) g'(w) dw.

    phi_t(z) = z t / (1-(1-t)z) and u_t(z) = tau phi_t(z) (1 - phi_t(z)) g'(phi_t(z)) / t,
    with ``boundary_limit`` the limit of (1-w) g'(w) at w = 1 and tau the unimodular
    number making tau * boundary_limit >= 0 (tau = 1 if the limit vanishes).
    At the direction 1, u_t(1) = tau * boundary_limit / t and phi_t'(1) = 1/t.
    """
    if boundary_limit is None:
        raise ValueError("volterra_family needs the boundary limit of (1-w) g'(w) at w = 1")
    limit = complex(boundary_limit)
    tau = _unit_phase(limit)

    def at(t):
        s = 1.0 - t

        def phi(z):
            return z * t / (1.0 - s * z)

        def dphi(z):
            return t / (1.0 - s * z) ** 2

        def u(z):
            w = phi(z)
            return tau * w / t * (1.0 - w) * g_prime.evaluate(w)

        du = None
        if g_prime.derivative is not None:
            def du(z):
                w = phi(z)
                inner = (1.0 - 2.0 * w) * g_prime.evaluate(w) + w * (1.0 - w) * g_prime.derivative(w)
                return tau / t * inner * dphi(z)

        return SymbolPair(_fn(u, du, "u_t"), _fn(phi, dphi, "phi_t"), {1 + 0j: (tau * limit / t, 1.0 / t)}, {1 + 0j: [1 + 0j]})

    def boundary(t, xi):
        if abs(xi - 1) > 1e-12:
            raise KeyError(f"no boundary data at direction {xi}")
        return tau * limit / t, 1.0 / t

    return SymbolFamily(
        at,
        (1 + 0j,),
        f"volterra(g'={g_prime.label or 'custom'})",
        "volterra",
        {"boundary_limit": limit, "tau": tau, "g_prime": g_prime.label},
        {"u": "tau*(z*t/(1-(1-t)*z))/t*(1-z*t/(1-(1-t)*z))*gp(z*t/(1-(1-t)*z))", "phi": "z*t/(1-(1-t)*z)"},
        None,
        boundary,
    )


def volterra_direct(g_prime: ComplexFunction, f: ComplexFunction, order: int = 48) -> ComplexFunction:
    """z -> int_0^z f(w) g'(w) dw along the segment [0, z] (Gauss rule, order vs 2*order)."""
    x1, w1 = gauss_legendre_rule(order)
    x2, w2 = gauss_legendre_rule(2 * order)
    s1, s2 = 0.5 * (np.asarray(x1) + 1.0), 0.5 * (np.asarray(x2) + 1.0)
    w1, w2 = 0.5 * np.asarray(w1), 0.5 * np.asarray(w2)
    diag = TIntegralDiagnostics()

    def ev(z):
        z = np.asarray(z, dtype=complex)
        zf = z.ravel()
        pts2 = s2[:, None] * zf[None, :]
        fine = zf * np.sum(w2[:, None] * f.evaluate(pts2) * g_prime.evaluate(pts2), axis=0)
        pts1 = s1[:, None] * zf[None, :]
        crude = zf * np.sum(w1[:, None] * f.evaluate(pts1) * g_prime.evaluate(pts1), axis=0)
        err = np.abs(fine - crude)
        diag.evaluations += zf.size
        if zf.size:
            diag.max_error = max(diag.max_error, float(np.max(err)))
        out = fine.reshape(z.shape)
        return out if z.shape else complex(out)

    def deriv(z):
        return f.evaluate(z) * g_prime.evaluate(z)

    return ComplexFunction(ev, deriv, f.singularities | g_prime.singularities, f"V_g({f.label})", diagnostics=diag)


def square_family(U: Callable, space: SpaceParams) -> SymbolFamily:
    """phi_t(z) = ((1 + (1+t) z) / (2+t))^2 and u_t = U(t) phi_t'^(2/p), direction 1.

    phi_t is two-to-one on the disk.  The principal power phi_t'^(2/p) has a
    cut along z in (-1, -1/(1+t)), where 1 + (1+t) z is negative; |u_t| is
    unaffected, so norms and the boundary data at 1 are not.
    """
    p = space.p

    def at(t):
        a = 1.0 + t
        b = 2.0 + t
        scale = float(U(t))

        def phi(z):
            return ((1.0 + a * z) / b) ** 2

        def dphi(z):
            return 2.0 * a * (1.0 + a * z) / b ** 2

        def u(z):
            return scale * np.exp((2.0 / p) * np.log(dphi(np.asarray(z, dtype=complex)) + 0j))

        def du(z):
            d2 = 2.0 * a * a / b ** 2
            return scale * (2.0 / p) * np.exp((2.0 / p - 1.0) * np.log(dphi(np.asarray(z, dtype=complex)) + 0j)) * d2

        d1 = 2.0 * a / b
        return SymbolPair(_fn(u, du, "u_t"), _fn(phi, dphi, "phi_t"), {1 + 0j: (scale * d1 ** (2.0 / p), d1)}, {1 + 0j: [1 + 0j]})

    def boundary(t, xi):
        if abs(xi - 1) > 1e-12:
            raise KeyError(f"no boundary data at direction {xi}")
        d1 = 2.0 * (1.0 + t) / (2.0 + t)
        return float(U(t)) * d1 ** (2.0 / p), d1

    return SymbolFamily(
        at,
        (1 + 0j,),
        f"square(U={getattr(U, '__name__', 'U')})",
        "square",
        {"U": getattr(U, "__name__", repr(U)), "p": p, "alpha": space.alpha},
        {"u": "U(t)*(2*(1+t)*(1+(1+t)*z)/(2+t)^2)^(2/p)", "phi": "((1+(1+t)*z)/(2+t))^2"},
        None,
        boundary,
    )


def _as_weight(w) -> ComplexFunction:
    if isinstance(w, ComplexFunction):
        return w
    value = complex(w)
    return ComplexFunction(
        lambda z: np.full(np.shape(z), value, dtype=complex),
        lambda z: np.zeros(np.shape(z), dtype=complex),
        frozenset(),
        f"{value:g}",
    )


def cubic_two_direction_family(c_of_t: Callable, u_spec: Callable) -> SymbolFamily:
    """phi_t(z) = z (c + (1-c) z^2) with c = c_of_t(t) in (0, 1); directions -1 and 1.

    ``u_spec(t)`` returns the weight u_t, either a number or a ComplexFunction
    analytic across the points -1 and 1.  phi_t(+-1) = +-1 and phi_t'(+-1) = 3 - 2c.
    """

    def coefficient(t):
        c = float(c_of_t(t))
        if not 0 < c < 1:
            raise ValueError(f"c(t) must lie in (0, 1), got c({t}) = {c}")
        return c

    def at(t):
        c = coefficient(t)
        u = _as_weight(u_spec(t))

        def phi(z):
            return z * (c + (1.0 - c) * z * z)

        def dphi(z):
            return c + 3.0 * (1.0 - c) * z * z

        d1 = 3.0 - 2.0 * c
        bv = {1 + 0j: (complex(u.evaluate(np.asarray(1 + 0j))), d1), -1 + 0j: (complex(u.evaluate(np.asarray(-1 + 0j))), d1)}
        return SymbolPair(u, _fn(phi, dphi, "phi_t"), bv, {1 + 0j: [1 + 0j], -1 + 0j: [-1 + 0j]})

    return SymbolFamily(
        at,
        (-1 + 0j, 1 + 0j),
        "cubic_two_direction",
        "cubic",
        {"c": getattr(c_of_t, "__name__", repr(c_of_t)), "u": getattr(u_spec, "__name__", repr(u_spec))},
        {"phi": "z*(c+(1-c)*z^2)"},
    )


def phase_family(base: SymbolFamily, phase: Callable) -> SymbolFamily:
    """Multiply u_t by exp(i phase(t)); phi_t and |u_t| are unchanged."""

    def at(t):
        pair = base.at(t)
        rot = cmath.exp(1j * float(phase(t)))
        u = pair.u
        du = None
        if u.derivative is not None:
            def du(z):
                return rot * u.derivative(z)
        new_u = ComplexFunction(lambda z: rot * u.evaluate(z), du, u.singularities, f"e^(i psi) {u.label}")
        bv = {xi: (rot * uv, dphi) for xi, (uv, dphi) in pair.boundary_values.items()}
        return SymbolPair(new_u, pair.phi, bv, pair.preimages, pair.numerical)

    def boundary(t, xi):
        uv, dphi = base.boundary_data(t, xi)
        return cmath.exp(1j * float(phase(t))) * uv, dphi

    name = getattr(phase, "__name__", "psi")
    return SymbolFamily(
        at,
        base.directions,
        f"phase({base.label}, {name})",
        "phase",
        {"base": base.to_dict(), "phase": name},
        dict(base.expressions),
        base.norm_bound,
        boundary,
        base.warnings,
    )


def constant_family(pair: SymbolPair, directions=None, label: str = "constant") -> SymbolFamily:
    """S_t = S for every t."""
    dirs = tuple(complex(x) for x in (directions if directions is not None else pair.boundary_values))
    return SymbolFamily(lambda t: pair, dirs, label, "constant", {}, {})


def evaluation_family() -> SymbolFamily:
    """S_t f = f(t) / (1 - t z): phi_t is the constant t, so each member is compact.

    Its mean is the Hilbert matrix operator; the norms of S_t are not integrable
    near t = 1.
    """

    def at(t):
        def u(z):
            return 1.0 / (1.0 - t * np.asarray(z, dtype=complex))

        def du(z):
            return t / (1.0 - t * np.asarray(z, dtype=complex)) ** 2

        phi = _fn(lambda z: np.full(np.shape(z), t, dtype=complex), lambda z: np.zeros(np.shape(z), dtype=complex), "t")
        return SymbolPair(_fn(u, du, "1/(1-tz)"), phi, {1 + 0j: (1.0 / (1.0 - t), INFINITE)}, {1 + 0j: []})

    return SymbolFamily(
        at,
        (1 + 0j,),
        "evaluation",
        "evaluation",
        {},
        {"u": "1/(1-t*z)", "phi": "t+0*z"},
        None,
        lambda t, xi: (1.0 / (1.0 - t), INFINITE),
    )


# --------------------------------------------------------------------------
# expression families


def radial_limit(g: Callable, xi: complex, k_from: int = 6, k_to: int = 12) -> tuple:
    """Limit of g(rho xi) as rho -> 1 from samples at rho = 1 - 2^-k.

    Richardson extrapolation in h = 2^-k assuming an expansion in powers of h.
    Returns (estimate, error estimate).
    """
    hs = [2.0 ** (-k) for k in range(k_from, k_to + 1)]
    row = [complex(g(np.asarray((1.0 - h) * xi))) for h in hs]
    table = [row]
    for j in range(1, len(hs)):
        prev = table[-1]
        fac = 2.0 ** j - 1.0
        table.append([prev[i + 1] + (prev[i + 1] - prev[i]) / fac for i in range(len(prev) - 1)])
    best = table[-1][0]
    err = abs(table[-1][0] - table[-2][-1]) if len(table) > 1 else abs(row[-1] - row[-2])
    return best, err


def dsl_family(
    u_expr: str,
    phi_expr: str,
    directions=(1 + 0j,),
    params: dict | None = None,
    label: str | None = None,
    norm_bound: Callable | None = None,
) -> SymbolFamily:
    """Family given by expressions in z and t (and named parameters).

    Boundary data are radial limits with Richardson extrapolation and are
    flagged as numerical.  When phi_t(rho xi) does not tend to xi, the angular
    derivative at xi is marked infinite.
    """
    params = dict(params or {})
    u_c = compile_expression(u_expr)
    phi_c = compile_expression(phi_expr)
    u_c.check_names(params)
    phi_c.check_names(params)
    dirs = tuple(complex(x) for x in directions)
    warnings = u_c.branch_warnings(0.5, **params) + phi_c.branch_warnings(0.5, **params)

    def boundary(t, xi):
        phi = phi_c.bind(t, **params)
        u = u_c.bind(t, **params)
        end, _ = radial_limit(phi.evaluate, xi)
        if abs(end - xi) > 1e-6:
            return radial_limit(u.evaluate, xi)[0], INFINITE
        dphi, _ = radial_limit(phi.derivative, xi)
        # the angular derivative at a fixed point is real and positive
        dphi = dphi.real if abs(dphi.imag) < 1e-6 * max(1.0, abs(dphi)) else dphi
        return radial_limit(u.evaluate, xi)[0], dphi

    def at(t):
        bv = {xi: boundary(t, xi) for xi in dirs}
        pre = {xi: ([xi] if bv[xi][1] != INFINITE else []) for xi in dirs}
        return SymbolPair(u_c.bind(t, **params), phi_c.bind(t, **params), bv, pre, numerical=True)

    return SymbolFamily(
        at,
        dirs,
        label or f"dsl(u={u_expr}, phi={phi_expr})",
        "dsl",
        dict(params),
        {"u": u_expr, "phi": phi_expr},
        norm_bound,
        boundary,
        warnings,
    )


def family_from_dict(desc: dict, space: SpaceParams | None = None) -> SymbolFamily:
    """Rebuild a family from the JSON description written by ``SymbolFamily.to_dict``.

    Only families fully determined by numbers and expressions can be rebuilt:
    hilbert, square with U = 1, and dsl.
    """
    kind = desc.get("kind")
    params = desc.get("parameters", {})
    if kind == "hilbert":
        return hilbert_family(params.get("lambda", 1.0))
    if kind == "square":
        space = space or SpaceParams(params["p"], params.get("alpha", 0.0))
        return square_family(_one, space)
    if kind == "dsl":
        expr = desc["expressions"]
        dirs = [complex(*d) if isinstance(d, (list, tuple)) else complex(d) for d in desc.get("directions", [[1, 0]])]
        return dsl_family(expr["u"], expr["phi"], dirs, params, desc.get("label"))
    raise ValueError(f"cannot rebuild a family of kind {kind!r} from its description")


def _one(t):
    return 1.0
