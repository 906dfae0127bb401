import cmath
import math

import numpy as np
import pytest

from bergman_workbench.bergman import ComplexFunction, constant, identity
from bergman_workbench.operators import (
    INFINITE,
    SymbolPair,
    apply_integral_operator,
    apply_weighted_composition,
    constant_family,
    cubic_two_direction_family,
    dsl_family,
    evaluation_family,
    family_from_dict,
    hilbert_family,
    phase_family,
    square_family,
    volterra_direct,
    volterra_family,
)
from bergman_workbench.special import SpaceParams


def fn(f, df=None):
    return ComplexFunction(f, df, frozenset())


def monomial(k):
    return fn(lambda z: np.asarray(z, dtype=complex) ** k, lambda z: k * np.asarray(z, dtype=complex) ** max(k - 1, 0))


GP_POLE = ComplexFunction(lambda z: 1 / (1 - np.asarray(z, dtype=complex)), lambda z: 1 / (1 - np.asarray(z, dtype=complex)) ** 2, frozenset({1 + 0j}))
GP_ONE = fn(lambda z: np.ones(np.shape(z), dtype=complex), lambda z: np.zeros(np.shape(z), dtype=complex))


def hilbert_direct(k, z):
    # int_0^1 t^k / (1 - t z) dt in closed form
    if z == 0:
        return 1 / (k + 1)
    tail = sum(z ** j / (j + 1) for j in range(k))
    return (-cmath.log(1 - z) / z - tail) / z ** k


def test_hilbert_mean_at_zero():
    fam = hilbert_family(1.0)
    assert abs(apply_integral_operator(fam, constant(1))(np.array([0j]))[0] - 1) < 1e-12
    assert abs(apply_integral_operator(fam, identity())(np.array([0j]))[0] - 0.5) < 1e-12


@pytest.mark.parametrize("k", [0, 1, 2])
def test_hilbert_representation_identity(k):
    z = np.array([0, 0.3, 0.5j])
    got = apply_integral_operator(hilbert_family(1.0), monomial(k))(z)
    want = np.array([hilbert_direct(k, complex(v)) for v in z])
    assert np.max(np.abs(got - want)) < 1e-6


def test_hilbert_boundary_data():
    assert hilbert_family(1).boundary_data(0.5, 1) == pytest.approx((2.0, 1.0))
    u, d = hilbert_family(2).boundary_data(0.5, 1)
    assert u == pytest.approx(2.0)
    for t in (0.1, 0.7):
        u, d = hilbert_family(1).boundary_data(t, 1)
        assert u == pytest.approx(1 / t) and d == pytest.approx((1 - t) / t)


@pytest.mark.parametrize("gp, f", [(GP_ONE, constant(1)), (GP_POLE, constant(1)), (GP_ONE, identity())], ids=["1,1", "pole,1", "1,w"])
def test_volterra_representation_identity(gp, f):
    fam = volterra_family(gp, 1 if gp is GP_POLE else 0)
    z = np.array([0.2, 0.5, 0.5 + 0.3j])
    got = apply_integral_operator(fam, f)(z)
    want = volterra_direct(gp, f)(z)
    assert np.max(np.abs(got - want)) < 1e-6


def test_volterra_direct_examples():
    z = np.array([0.3, -0.2 + 0.4j])
    assert np.allclose(volterra_direct(GP_ONE, constant(1))(z), z, atol=1e-14)
    assert np.allclose(volterra_direct(GP_ONE, identity())(z), z ** 2 / 2, atol=1e-14)
    assert abs(volterra_direct(GP_POLE, constant(1))(np.array([0.5]))[0] - math.log(2)) < 1e-10


def test_volterra_family_data():
    fam = volterra_family(GP_POLE, 1)
    u, d = fam.boundary_data(0.25, 1)
    assert d == pytest.approx(4.0)
    assert fam.params["tau"] == 1
    assert fam.at(0.5).u(np.array([0j]))[0] == 0
    assert volterra_family(GP_ONE, 0).params["tau"] == 1
    rotated = volterra_family(GP_POLE, 1j)
    assert rotated.params["tau"] * 1j == pytest.approx(1)
    with pytest.raises(ValueError):
        volterra_family(GP_POLE, None)


def test_square_family():
    space = SpaceParams(4, 0)
    fam = square_family(lambda t: 1.0, space)
    pair = fam.at(0.5)
    assert pair.phi.derivative(np.array([1 + 0j]))[0] == pytest.approx(1.2)
    assert fam.boundary_data(0.5, 1)[1] == pytest.approx(1.2)
    assert pair.phi(np.array([-1 / 3 + 0j]))[0] == pytest.approx(1 / 25)
    # the other root of ((1 + 1.5 z) / 2.5)^2 = 1/25
    assert pair.phi(np.array([-1.0 + 0j]))[0] == pytest.approx(1 / 25)


def test_cubic_family():
    fam = cubic_two_direction_family(lambda t: 0.5, lambda t: 1.0)
    pair = fam.at(0.3)
    assert fam.boundary_data(0.3, 1)[1] == pytest.approx(2.0)
    assert fam.boundary_data(0.3, -1)[1] == pytest.approx(2.0)
    assert pair.phi(np.array([1j]))[0] == pytest.approx(0)
    theta = np.linspace(0, 2 * np.pi, 720, endpoint=False)
    keep = (np.abs(np.sin(theta)) > 1e-9)
    for c in (0.25, 0.5, 0.75):
        phi = cubic_two_direction_family(lambda t, c=c: c, lambda t: 1.0).at(0.5).phi
        assert np.all(np.abs(phi(np.exp(1j * theta[keep]))) < 1)
    with pytest.raises(ValueError):
        cubic_two_direction_family(lambda t: 1.2, lambda t: 1.0).at(0.5)


def test_phase_family():
    base = hilbert_family(1)
    same = phase_family(base, lambda t: 0.0)
    z = np.array([0.1, 0.3j])
    assert np.allclose(same.at(0.4).u(z), base.at(0.4).u(z))
    turned = phase_family(base, lambda t: math.pi * t)
    u, _ = turned.boundary_data(0.5, 1)
    assert u == pytest.approx(2j)


def test_constant_family_matches_single_operator():
    pair = hilbert_family(1).at(0.5)
    fam = constant_family(pair)
    f = fn(lambda z: np.exp(np.asarray(z, dtype=complex)), lambda z: np.exp(np.asarray(z, dtype=complex)))
    z = np.array([0.2, -0.4 + 0.1j, 0.6j])
    assert np.max(np.abs(apply_integral_operator(fam, f)(z) - apply_weighted_composition(pair, f)(z))) < 1e-10


def test_evaluation_family_is_compact():
    fam = evaluation_family()
    assert fam.boundary_data(0.5, 1)[1] == INFINITE
    assert fam.at(0.5).contact_points == frozenset()


def test_symbol_pair_rejects_bad_angular_derivative():
    with pytest.raises(ValueError):
        SymbolPair(constant(1), identity(), {1 + 0j: (1, -1.0)})


SELF_MAP_FAMILIES = {
    "hilbert": hilbert_family(1),
    "hilbert2": hilbert_family(2),
    "volterra": volterra_family(GP_POLE, 1),
    "square": square_family(lambda t: 1.0, SpaceParams(4, 0)),
    "cubic": cubic_two_direction_family(lambda t: 0.5, lambda t: 1.0),
    "evaluation": evaluation_family(),
}


@pytest.mark.parametrize("name", sorted(SELF_MAP_FAMILIES))
def test_self_map(name):
    g = np.linspace(-1, 1, 35)[1:-1]
    z = (g[:, None] + 1j * g[None, :]).ravel()
    z = z[np.abs(z) < 1]
    for t in np.arange(1, 10) / 10:
        assert np.all(np.abs(SELF_MAP_FAMILIES[name].at(t).phi(z)) < 1)


def test_dsl_round_trip_hilbert():
    built = hilbert_family(2.0)
    fam = dsl_family("t^(l-1)/(1-(1-t)*z)^l", "t/(1-(1-t)*z)", params={"l": 2.0})
    rng = np.random.default_rng(7)
    ts = rng.uniform(0.01, 0.99, 100)
    zs = np.sqrt(rng.uniform(0, 0.98, 100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    for t, z in zip(ts, zs):
        a, b = fam.at(t), built.at(t)
        zz = np.array([z])
        assert abs(a.u(zz)[0] - b.u(zz)[0]) <= 1e-12 * abs(b.u(zz)[0])
        assert abs(a.phi(zz)[0] - b.phi(zz)[0]) <= 1e-12
        assert abs(a.phi.derivative(zz)[0] - b.phi.derivative(zz)[0]) <= 1e-12 * abs(b.phi.derivative(zz)[0])


def test_dsl_boundary_data_are_radial_limits():
    fam = dsl_family("1/(1-(1-t)*z)", "t/(1-(1-t)*z)")
    u, d = fam.boundary_data(0.5, 1)
    assert abs(u - 2) < 1e-6 and abs(d - 1) < 1e-6
    assert fam.at(0.5).numerical


def test_family_description_round_trip():
    for fam in (hilbert_family(1.5), dsl_family("1+0*z", "(1+z)/2")):
        again = family_from_dict(fam.to_dict())
        assert again.to_dict() == fam.to_dict()
        z = np.array([0.25 + 0.1j])
        assert np.allclose(again.at(0.3).phi(z), fam.at(0.3).phi(z))
