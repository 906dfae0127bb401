import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergman_workbench.dsl import ExpressionError, compile_expression, parse_symbol_expression


def test_examples():
    f = parse_symbol_expression("t^(l-1)/(1-(1-t)*z)^l", t=0.5, l=1)
    assert f(np.asarray(0j)) == pytest.approx(1)
    g = parse_symbol_expression("z*(c+(1-c)*z^2)", c=0.5)
    assert abs(g(np.asarray(1j))) < 1e-15
    h = parse_symbol_expression("exp(i*pi*t)", t=1)
    assert h(np.asarray(0j)) == pytest.approx(-1)


def test_precedence_and_associativity():
    ev = lambda s: compile_expression(s).evaluate(np.asarray(0j))
    assert ev("2^3^2") == 512
    assert ev("2**3") == 8
    assert ev("-2^2") == -4
    assert ev("1-2-3") == -4
    assert ev("8/2/2") == 2
    assert ev("2*3+4") == 10
    assert ev("1.5e1 + .5") == 15.5


def test_functions_principal_branches():
    z = np.array([-4 + 1e-300j, 1j])
    assert np.allclose(parse_symbol_expression("sqrt(z)")(z), [2j, cmath.sqrt(1j)])
    assert parse_symbol_expression("log(z)")(np.asarray(-1 + 0j)) == pytest.approx(1j * np.pi)
    assert parse_symbol_expression("abs(z)+conj(z)")(np.asarray(3 + 4j)) == pytest.approx(8 - 4j)


def test_errors_carry_position():
    with pytest.raises(ExpressionError) as e:
        compile_expression("1 + * 2")
    assert e.value.position == 4
    with pytest.raises(ExpressionError):
        compile_expression("(1 + z")
    with pytest.raises(ExpressionError) as e:
        parse_symbol_expression("z + q")
    assert e.value.position == 4
    with pytest.raises(ExpressionError):
        parse_symbol_expression("z*t")


def test_branch_warning():
    assert parse_symbol_expression("(1-z)^0.5").warnings == ()
    assert parse_symbol_expression("(z-0.5)^0.5").warnings
    assert parse_symbol_expression("(z-0.5)^2").warnings == ()


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.sampled_from([
    "exp(z)*(1-z)^(-0.3)",
    "t/(1-(1-t)*z)",
    "sqrt(1+z)/(2-z)^2",
    "log(1+z/2)*z^3",
]))
def test_derivative_matches_difference_quotient(x, y, text):
    z = complex(x, y)
    if abs(z) > 0.9:
        return
    f = parse_symbol_expression(text, t=0.4)
    h = 1e-6
    fd = (f(np.asarray(z + h)) - f(np.asarray(z - h))) / (2 * h)
    assert abs(f.derivative(np.asarray(z)) - fd) <= 1e-6 * max(1, abs(fd))
