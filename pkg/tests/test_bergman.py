import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergman_workbench.bergman import (
    ComplexFunction,
    bergman_norm,
    constant,
    identity,
    make_boundary_peak,
    make_power_kernel,
    make_two_point_kernel,
    rotate,
)
from bergman_workbench.quadrature import QuadratureSpec
from bergman_workbench.special import SpaceParams, power_kernel_norm_oracle

SPACES = [SpaceParams(2, 0), SpaceParams(4, 0), SpaceParams(5, 1), SpaceParams(3, 2.5)]


def power(c, xi=1):
    xi = complex(xi)
    return ComplexFunction(lambda z: (1 - np.conj(xi) * z) ** (-c), None, frozenset({xi}), singular_order=c)


@pytest.mark.parametrize("space", SPACES, ids=str)
def test_norm_of_constant(space):
    assert abs(bergman_norm(constant(1), space).value - 1) < 1e-10


def test_norm_of_z():
    assert abs(bergman_norm(identity(), SpaceParams(2, 0)).value - 1 / math.sqrt(2)) < 1e-12


@pytest.mark.parametrize("space", SPACES, ids=str)
def test_power_norm_matches_oracle(space):
    c = 0.5 * space.critical_exponent
    r = bergman_norm(power(c), space, QuadratureSpec(rel_tol=1e-9))
    want = power_kernel_norm_oracle(c, space) ** (1 / space.p)
    assert r.converged
    assert abs(r.value - want) <= 1e-7 * want


def test_power_kernel_value_and_rejection():
    space = SpaceParams(4, 0)
    k = make_power_kernel(0.3, 1, space)
    n = power_kernel_norm_oracle(0.3, space) ** 0.25
    assert abs(k(np.array([0j]))[0] - 1 / n) < 1e-14
    with pytest.raises(ValueError):
        make_power_kernel(0.5, 1, space)
    with pytest.raises(ValueError):
        make_power_kernel(0.2, 0.5, space)


@pytest.mark.parametrize("space", SPACES, ids=str)
def test_kernels_have_unit_norm(space):
    cs = space.critical_exponent
    for c in (0.1 * cs, 0.5 * cs, 0.9 * cs):
        k = make_power_kernel(c, 1j, space)
        assert abs(bergman_norm(k.function, space, QuadratureSpec(rel_tol=1e-9)).value - 1) < 1e-6
    g = make_two_point_kernel(0.5 * cs, 0.5, space)
    assert abs(bergman_norm(g.function, space, QuadratureSpec(rel_tol=1e-9)).value - 1) < 1e-6


def test_power_kernel_modulus_increases_along_radius():
    k = make_power_kernel(0.3, 1, SpaceParams(4, 0))
    x = np.linspace(0, 0.999, 200)
    assert np.all(np.diff(np.abs(k(x))) > 0)


def test_two_point_endpoints_reduce_to_power_kernels():
    space = SpaceParams(4, 0)
    z = np.array([0.1 + 0.2j, -0.5j, 0.7, -0.3 + 0.1j])
    for theta, xi in ((1.0, -1), (0.0, 1)):
        g = make_two_point_kernel(0.3, theta, space)
        f = make_power_kernel(0.3, xi, space)
        ratio = g(z) / f(z)
        assert np.max(np.abs(ratio - ratio[0])) < 1e-12
        assert abs(abs(ratio[0]) - 1) < 1e-6


def test_boundary_peak():
    space = SpaceParams(3, 1)
    assert make_boundary_peak(0, 1, space).normalization == 1
    for n in (1, 8, 64):
        h = make_boundary_peak(n, 1, space)
        assert abs(bergman_norm(h.function, space, QuadratureSpec(rel_tol=1e-9)).value - 1) < 1e-6
    one_minus = ComplexFunction(lambda z: 1 - z, None)
    vals = [bergman_norm(make_boundary_peak(n, 1, space).function.times(one_minus), space).value for n in (16, 64, 256)]
    assert vals[0] > vals[1] > vals[2]


def test_vanishing_off_the_direction():
    space = SpaceParams(4, 0)
    r = np.linspace(0, 0.999, 40)
    a = np.linspace(0, 2 * np.pi, 80)
    z = (r[:, None] * np.exp(1j * a[None, :])).ravel()
    z = z[np.abs(z - 1) >= 0.3]
    cs = space.critical_exponent
    sups = [np.max(np.abs(make_power_kernel(cs * (1 - 0.4 * 2.0 ** -k), 1, space)(z))) for k in range(6)]
    assert all(b < a for a, b in zip(sups, sups[1:]))
    assert sups[-1] < 0.6 * sups[0]


@settings(max_examples=15, deadline=None)
@given(st.floats(0, 2 * math.pi), st.sampled_from([0, 1, 2]))
def test_rotation_covariance(angle, which):
    space = SpaceParams(4, 0)
    xi = cmath.exp(1j * angle)
    g = [identity(), ComplexFunction(lambda z: (1 + z) / 2, None), ComplexFunction(lambda z: np.exp(z - 1), None)][which]
    c = 0.3
    lhs = bergman_norm(make_power_kernel(c, xi, space).function.times(rotate(g, np.conj(xi))), space)
    rhs = bergman_norm(make_power_kernel(c, 1, space).function.times(g), space)
    assert abs(lhs.value - rhs.value) <= 10 * (lhs.error_estimate + rhs.error_estimate) + 1e-9
