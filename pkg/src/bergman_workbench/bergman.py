"""Norms in A^p_alpha and the boundary test kernels."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .quadrature import QuadratureSpec, integrate_disk
from .special import SpaceParams, power_kernel_norm_oracle

__all__ = [
    "ComplexFunction",
    "NormResult",
    "TestKernel",
    "bergman_norm",
    "make_power_kernel",
    "make_two_point_kernel",
    "make_boundary_peak",
    "constant",
    "identity",
    "rotate",
]


def _unimodular(xi) -> complex:
    xi = complex(xi)
    if abs(abs(xi) - 1.0) > 1e-12:
        raise ValueError(f"direction {xi!r} is not on the unit circle")
    return xi


@dataclass(frozen=True)
class ComplexFunction:
    """An analytic function on the open disk, evaluated on numpy arrays."""

    evaluate: Callable
    derivative: Callable | None = None
    singularities: frozenset = field(default_factory=frozenset)
    label: str = ""
    warnings: tuple = ()
    diagnostics: object = field(default=None, compare=False)
    # |f(z)| ~ |xi - z|^-singular_order at the singular points, when known
    singular_order: float | None = None

    def __call__(self, z):
        return self.evaluate(np.asarray(z, dtype=complex))

    def d(self, z):
        if self.derivative is None:
            raise ValueError(f"function {self.label or self!r} has no derivative")
        return self.derivative(np.asarray(z, dtype=complex))

    def times(self, other: "ComplexFunction") -> "ComplexFunction":
        def ev(z):
            return self.evaluate(z) * other.evaluate(z)

        deriv = None
        if self.derivative is not None and other.derivative is not None:
            def deriv(z):
                return self.derivative(z) * other.evaluate(z) + self.evaluate(z) * other.derivative(z)

        return ComplexFunction(
            ev,
            deriv,
            self.singularities | other.singularities,
            f"({self.label})*({other.label})",
            self.warnings + other.warnings,
            singular_order=_product_order(self, other),
        )


def _product_order(f: ComplexFunction, g: ComplexFunction):
    if not g.singularities:
        return f.singular_order
    if not f.singularities:
        return g.singular_order
    return None


def constant(value: complex) -> ComplexFunction:
    value = complex(value)
    return ComplexFunction(
        lambda z: np.full(np.shape(z), value, dtype=complex),
        lambda z: np.zeros(np.shape(z), dtype=complex),
        frozenset(),
        repr(value),
    )


def identity() -> ComplexFunction:
    return ComplexFunction(lambda z: z + 0j, lambda z: np.ones(np.shape(z), dtype=complex), frozenset(), "z")


def rotate(f: ComplexFunction, rho: complex) -> ComplexFunction:
    """z -> f(rho z) for unimodular rho."""
    rho = _unimodular(rho)
    deriv = None
    if f.derivative is not None:
        def deriv(z):
            return rho * f.derivative(rho * z)
    return ComplexFunction(
        lambda z: f.evaluate(rho * z),
        deriv,
        frozenset(s / rho for s in f.singularities),
        f"{f.label}(rho z)",
        singular_order=f.singular_order,
    )


@dataclass(frozen=True)
class NormResult:
    value: float
    error_estimate: float
    converged: bool
    cells_used: int = 0

    def __float__(self):
        return float(self.value)


def bergman_norm(f: ComplexFunction, space: SpaceParams, spec: QuadratureSpec | None = None) -> NormResult:
    """(int_D |f|^p dA_alpha)^(1/p), declaring f's boundary singularities to the grid."""
    spec = (spec or QuadratureSpec()).with_singularities(sorted(f.singularities, key=cmath.phase))
    p = space.p
    if f.singular_order is not None and spec.blowup_order is None:
        spec = replace(spec, blowup_order=p * f.singular_order)

    def integrand(z):
        return np.abs(f.evaluate(z)) ** p

    res = integrate_disk(integrand, space.alpha, spec)
    mass = max(float(np.real(res.value)), 0.0)
    value = mass ** (1.0 / p)
    # d(m^(1/p)) = m^(1/p - 1) dm / p
    err = value / (p * mass) * res.error_estimate if mass > 0 else res.error_estimate ** (1.0 / p)
    return NormResult(value, err, res.converged, res.cells_used)


@dataclass(frozen=True)
class TestKernel:
    """A unit vector of A^p_alpha from one of the boundary kernel families."""

    __test__ = False  # not a pytest class

    kind: str
    xi: complex
    c: float
    theta: float
    n: int
    normalization: float
    space: SpaceParams
    function: ComplexFunction

    def __call__(self, z):
        return self.function(z)

    @property
    def evaluate(self):
        return self.function.evaluate

    @property
    def singularities(self):
        return self.function.singularities

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "xi": [self.xi.real, self.xi.imag],
            "c": self.c,
            "theta": self.theta,
            "n": self.n,
            "normalization": self.normalization,
            "space": self.space.to_dict(),
        }


def _power(xi: complex, c: float):
    """Evaluator and derivative of z -> (xi - z)^-c with the principal branch of log(1 - conj(xi) z)."""
    xi_pow = cmath.exp(-c * 1j * cmath.phase(xi))
    xb = xi.conjugate()

    def ev(z):
        return xi_pow * np.exp(-c * np.log(1.0 - xb * z))

    def deriv(z):
        w = 1.0 - xb * z
        return xi_pow * c * xb * np.exp(-(c + 1.0) * np.log(w))

    return ev, deriv


def _check_order(c: float, space: SpaceParams):
    if not 0 < c < space.critical_exponent:
        raise ValueError(f"kernel order must satisfy 0 < c < (2+alpha)/p = {space.critical_exponent}, got {c}")


def make_power_kernel(c: float, xi, space: SpaceParams) -> TestKernel:
    """f_{c,xi} = (xi - z)^-c / ||(xi - z)^-c||, normalized by the series value."""
    _check_order(c, space)
    xi = _unimodular(xi)
    norm = power_kernel_norm_oracle(c, space) ** (1.0 / space.p)
    ev, deriv = _power(xi, c)
    fn = ComplexFunction(
        lambda z: ev(z) / norm,
        lambda z: deriv(z) / norm,
        frozenset({xi}),
        f"f_(c={c:g}, xi={xi:g})",
        singular_order=c,
    )
    return TestKernel("power", xi, c, 0.0, 0, norm, space, fn)


def make_two_point_kernel(c: float, theta: float, space: SpaceParams, spec: QuadratureSpec | None = None) -> TestKernel:
    """g_{c,theta} proportional to theta (1+z)^-c + (1-theta) (1-z)^-c, normalized by quadrature."""
    _check_order(c, space)
    if not 0 <= theta <= 1:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    plus_ev, plus_d = _power(1.0 + 0j, c)     # (1 - z)^-c
    minus_ev, minus_d = _power(-1.0 + 0j, c)  # (-1 - z)^-c = e^{-i pi c} (1 + z)^-c
    phase = cmath.exp(1j * math.pi * c)

    def raw(z):
        return theta * phase * minus_ev(z) + (1.0 - theta) * plus_ev(z)

    def raw_d(z):
        return theta * phase * minus_d(z) + (1.0 - theta) * plus_d(z)

    sing = set()
    if theta > 0:
        sing.add(-1.0 + 0j)
    if theta < 1:
        sing.add(1.0 + 0j)
    raw_fn = ComplexFunction(raw, raw_d, frozenset(sing), singular_order=c)
    tight = replace(spec or QuadratureSpec(), rel_tol=1e-10)
    norm = bergman_norm(raw_fn, space, tight).value
    fn = ComplexFunction(
        lambda z: raw(z) / norm,
        lambda z: raw_d(z) / norm,
        frozenset(sing),
        f"g_(c={c:g}, theta={theta:g})",
        singular_order=c,
    )
    return TestKernel("two_point", 1.0 + 0j, c, float(theta), 0, norm, space, fn)


def make_boundary_peak(n: int, xi, space: SpaceParams, spec: QuadratureSpec | None = None) -> TestKernel:
    """h_{n,xi} proportional to ((xi + z)/2)^n."""
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    n = int(n)
    xi = _unimodular(xi)

    def raw(z):
        return ((xi + z) / 2.0) ** n

    def raw_d(z):
        return 0.5 * n * ((xi + z) / 2.0) ** (n - 1) if n else np.zeros(np.shape(z), dtype=complex)

    if n == 0:
        norm = 1.0
    else:
        # ||h||^p = int |(1+z)/2|^(np) dA_alpha, which concentrates at xi for large n
        raw_fn = ComplexFunction(raw, raw_d, frozenset({xi}))
        tight = replace(spec or QuadratureSpec(), rel_tol=1e-10)
        norm = bergman_norm(raw_fn, space, tight).value
    fn = ComplexFunction(
        lambda z: raw(z) / norm,
        lambda z: raw_d(z) / norm,
        frozenset({xi}) if n else frozenset(),
        f"h_(n={n}, xi={xi:g})",
    )
    return TestKernel("boundary_peak", xi, 0.0, 0.0, n, norm, space, fn)
