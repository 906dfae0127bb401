import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergman_workbench.bergman import ComplexFunction, constant
from bergman_workbench.essnorm import (
    ThetaVector,
    collinearity_verdict,
    default_c_schedule,
    extrapolate_limit,
    formula_absolute,
    formula_signed,
    kernel_limit_curves,
    preimage_sum,
    theta_vector,
    two_direction_quantities,
    two_direction_weights,
)
from bergman_workbench.operators import (
    SymbolPair,
    constant_family,
    cubic_two_direction_family,
    hilbert_family,
    phase_family,
    square_family,
    volterra_family,
)
from bergman_workbench.special import SpaceParams

# |int_0^1 e^{i pi t} t^-0.6 (1-t)^-0.4 dt|, 30-digit quadrature
PHASED_HILBERT_SIGNED = 1.6585188743954547115
SQUARE_4_1 = 0.95861336288655954591

GP_POLE = ComplexFunction(lambda z: 1 / (1 - np.asarray(z, dtype=complex)), None, frozenset({1 + 0j}))


def _pi_t(t):
    return math.pi * t


def _two_pi_t(t):
    return 2 * math.pi * t


def test_formula_values():
    assert formula_absolute(hilbert_family(1), 1, SpaceParams(5, 0)).value == pytest.approx(math.pi / math.sin(0.4 * math.pi), rel=1e-9)
    assert formula_absolute(hilbert_family(1), 1, SpaceParams(6, 1)).value == pytest.approx(math.pi, rel=1e-9)
    assert formula_absolute(volterra_family(GP_POLE, 1), 1, SpaceParams(4, 0)).value == pytest.approx(2.0, rel=1e-12)
    one = lambda t: 1.0
    assert formula_absolute(square_family(one, SpaceParams(4, 0)), 1, SpaceParams(4, 0)).value == pytest.approx(1.0, abs=1e-12)
    sq = formula_absolute(square_family(one, SpaceParams(4, 1)), 1, SpaceParams(4, 1))
    assert sq.converged and abs(sq.value - SQUARE_4_1) < 1e-10


def test_formula_zero_for_compact_volterra():
    gp = ComplexFunction(lambda z: np.ones(np.shape(z), dtype=complex), None, frozenset())
    assert formula_absolute(volterra_family(gp, 0), 1, SpaceParams(4, 0)).value == 0


def test_signed_formula_with_phase():
    space = SpaceParams(5, 0)
    fam = phase_family(hilbert_family(1), _pi_t)
    assert abs(formula_signed(fam, 1, space).value - PHASED_HILBERT_SIGNED) < 1e-8
    assert formula_signed(fam, 1, space).value <= formula_absolute(fam, 1, space).value + 1e-12


def test_constant_modulus_probes():
    space = SpaceParams(2, 0)
    for phase, want in ((_pi_t, 2 / math.pi), (_two_pi_t, 0.0)):
        fam = cubic_two_direction_family(lambda t: 0.5, lambda t, phase=phase: cmath.exp(1j * phase(t)))
        ratio = formula_signed(fam, 1, space).value / formula_absolute(fam, 1, space).value
        assert abs(ratio - want) < 1e-10


@settings(max_examples=10, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_phase_invariance_of_absolute_formula(a, b):
    space = SpaceParams(5, 0)
    base = hilbert_family(1)
    ref = formula_absolute(base, 1, space).value
    turned = phase_family(base, lambda t: a * t + b * t * t)
    assert abs(formula_absolute(turned, 1, space).value - ref) <= 1e-12 * ref


@settings(max_examples=10, deadline=None)
@given(st.floats(-math.pi, math.pi))
def test_global_phase_invariance_of_signed_formula(a):
    space = SpaceParams(5, 0)
    base = phase_family(hilbert_family(1), _pi_t)
    ref = formula_signed(base, 1, space).value
    turned = phase_family(base, lambda t: a)
    assert abs(formula_signed(turned, 1, space).value - ref) <= 1e-12 * ref


@pytest.mark.parametrize("space", [SpaceParams(5, 0), SpaceParams(6, 1), SpaceParams(4, 0)], ids=str)
def test_consistency_for_constant_argument(space):
    for fam in (hilbert_family(1), hilbert_family(2), volterra_family(GP_POLE, 1)):
        fa = formula_absolute(fam, 1, space).value
        fs = formula_signed(fam, 1, space).value
        assert abs(fa - fs) <= 1e-10 * fa


def test_extrapolation():
    assert extrapolate_limit([(0.1, 2.0), (0.2, 2.0), (0.3, 2.0)]) == (2.0, 0.0)
    samples = [(0.5 - 0.1 * 2.0 ** -k, 3.0 - 2.0 ** -k) for k in range(6)]
    est, _ = extrapolate_limit(samples, 0.5)
    assert abs(est - 3.0) < 1e-14
    _, diag = extrapolate_limit([(0.1, 1.0), (0.2, 2.0), (0.3, 1.0), (0.4, 2.0)])
    assert diag >= 1.0
    with pytest.raises(ValueError):
        extrapolate_limit([(0.1, 1.0), (0.2, 1.0)])


def test_weights():
    assert two_direction_weights(0.5, 3) == (0.5, 0.5)
    wp, wm = two_direction_weights(0.25, 2)
    assert wp == pytest.approx(0.9) and wm == pytest.approx(0.1)
    assert two_direction_weights(0.0, 4) == (1.0, 0.0)


def test_collinearity_examples():
    mk = lambda a, b, t=0.0: ThetaVector(a, b, t)
    ts = np.linspace(0.05, 0.95, 9)
    assert collinearity_verdict([mk(1, 1, t) for t in ts]) == "equality_expected"
    assert collinearity_verdict([mk(cmath.exp(1j * math.pi * t), cmath.exp(1j * math.pi * t), t) for t in ts]) == "strict_inequality_expected"
    assert collinearity_verdict([mk(2 * t, 3 * t, t) for t in ts]) == "equality_expected"
    assert collinearity_verdict([mk(0, 0, t) for t in ts]) == "degenerate"
    assert collinearity_verdict([mk(1, 0), mk(0, 1)]) == "strict_inequality_expected"


def test_theta_modes_coincide_without_weight():
    fam = cubic_two_direction_family(lambda t: 0.3 + 0.4 * t, lambda t: 1.0)
    a = theta_vector(fam, 0.4, 0.3, SpaceParams(3, 0), "paper_2_over_p")
    b = theta_vector(fam, 0.4, 0.3, SpaceParams(3, 0), "full_2plusalpha_over_p")
    assert np.allclose(a.as_array(), b.as_array(), rtol=1e-14)
    c = theta_vector(fam, 0.4, 0.3, SpaceParams(3, 1), "full_2plusalpha_over_p")
    assert not np.allclose(a.as_array(), c.as_array())


def test_preimage_sum_examples():
    phi = ComplexFunction(lambda z: (1 + np.asarray(z, dtype=complex) ** 2) / 2, lambda z: np.asarray(z, dtype=complex), frozenset())
    one = constant(1)
    sym = SymbolPair(one, phi, {1 + 0j: (1.0, 1.0)}, {1 + 0j: [1 + 0j, -1 + 0j]})
    assert preimage_sum(sym, 1, [-1, 1], SpaceParams(2, 0)) == pytest.approx(2.0)
    zero = SymbolPair(constant(0), phi)
    assert preimage_sum(zero, 1, [-1, 1], SpaceParams(2, 0)) == 0
    h = hilbert_family(1).at(0.5)
    assert preimage_sum(h, 1, [1], SpaceParams(5, 0)) == pytest.approx(32.0)
    with pytest.raises(ValueError, match="1j"):
        preimage_sum(sym, 1, [1j], SpaceParams(2, 0))


def test_two_direction_closed_forms():
    space = SpaceParams(2, 0)
    flat = two_direction_quantities(cubic_two_direction_family(lambda t: 0.5, lambda t: 1.0), 0.5, space, numerical=False)
    assert abs(flat.gap) < 1e-10
    assert flat.collinearity["paper_2_over_p"] == "equality_expected"
    turned = two_direction_quantities(cubic_two_direction_family(lambda t: 0.5, lambda t: cmath.exp(1j * math.pi * t)), 0.5, space, numerical=False)
    assert turned.closed_rhs == pytest.approx(0.5, rel=1e-10)
    assert turned.ratio == pytest.approx(2 / math.pi, rel=1e-10)
    assert turned.collinearity["paper_2_over_p"] == "strict_inequality_expected"
    again = two_direction_quantities(cubic_two_direction_family(lambda t: 0.5, lambda t: cmath.exp(1j * math.pi * t)), 0.5, space, numerical=False)
    assert json.dumps(again.to_dict(), sort_keys=True, default=str) == json.dumps(turned.to_dict(), sort_keys=True, default=str)
    with pytest.raises(ValueError):
        two_direction_quantities(hilbert_family(1), 0.5, space, numerical=False)


def test_schedule_validation():
    space = SpaceParams(5, 0)
    sched = default_c_schedule(space)
    assert len(sched) == 6 and sched[0] == pytest.approx(0.24) and all(c < 0.4 for c in sched)
    with pytest.raises(ValueError):
        kernel_limit_curves(hilbert_family(1), 1, space, [0.3, 0.2])
    with pytest.raises(ValueError):
        kernel_limit_curves(hilbert_family(1), 1, space, [0.3, 0.4])


def test_degenerate_family_has_equal_sides():
    space = SpaceParams(2, 0)
    fam = constant_family(hilbert_family(1).at(0.5), [1])
    for s in kernel_limit_curves(fam, 1, space, [0.5, 0.7]):
        assert abs(s.lhs - s.rhs) <= 1e-6 * s.rhs + s.lhs_error + s.rhs_error


@pytest.mark.slow
def test_minkowski_and_phase_invariance_of_rhs():
    space = SpaceParams(5, 0)
    c = [0.5 * space.critical_exponent]
    plain = kernel_limit_curves(hilbert_family(1), 1, space, c)[0]
    turned = kernel_limit_curves(phase_family(hilbert_family(1), _pi_t), 1, space, c)[0]
    assert plain.minkowski_ok and turned.minkowski_ok
    assert abs(plain.rhs - turned.rhs) <= 10 * (plain.rhs_error + turned.rhs_error) + 1e-8
    # cancellation between t-slices makes the phased mean smaller
    assert turned.lhs < plain.lhs
