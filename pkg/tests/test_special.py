import math

import pytest
from hypothesis import given, settings, strategies as st

from bergman_workbench.special import (
    SpaceParams,
    beta,
    disk_moment,
    gamma,
    log_gamma,
    power_kernel_norm_closed_form,
    power_kernel_norm_oracle,
)

# reference values from 30-digit arithmetic (Gauss 3F2 sums for the kernel norms)
GAMMA_REF = {0.3: 2.9915689876875907446, 7.5: 1871.2543057977883465}
LOG_GAMMA_REF = {100.5: 361.43554046777762156, 1e-3: 6.9071788853838536617}
KERNEL_NORM_P = {
    (2, 0, 0.5): 1.2732395447351626862,
    (4, 0, 0.45): 5.0723727438963153821,
    (5, 1, 0.3): 1.380742659042251112,
    (5, 1, 0.54): 7.3846729679795221458,
    (3, 2.5, 1.35): 13.41412231694463244,
    (3, 2.5, 1.45): 51.564417340395214038,
}


def test_space_params():
    s = SpaceParams(5, 1)
    assert s.critical_exponent == pytest.approx(0.6)
    for bad in [(1.0, 0.0), (2.0, -0.5)]:
        with pytest.raises(ValueError):
            SpaceParams(*bad)


def test_gamma_reference_values():
    for x, v in GAMMA_REF.items():
        assert abs(gamma(x) - v) <= 1e-12 * v
    for x, v in LOG_GAMMA_REF.items():
        assert abs(log_gamma(x) - v) <= 1e-12 * abs(v)
    assert gamma(5) == pytest.approx(24, rel=1e-14)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)


def test_beta_identities():
    grid = [0.3, 1.0, 2.7]
    for a in grid:
        assert abs(beta(a, 1) - 1 / a) < 1e-12
        for b in grid:
            assert abs(beta(a, b) - beta(b, a)) < 1e-12
            assert abs(beta(a, b) - beta(a + 1, b) - beta(a, b + 1)) < 1e-12
    assert abs(beta(2.7, 0.3) - 2.3105171360833052888) < 1e-12
    with pytest.raises(ValueError):
        beta(0, 1)


def test_disk_moment_example():
    assert disk_moment(2, 1.0) == pytest.approx(1 / 6, abs=1e-14)
    assert disk_moment(0, 3.3) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("key", sorted(KERNEL_NORM_P))
def test_kernel_norm_oracle_matches_reference(key):
    p, alpha, c = key
    space = SpaceParams(p, alpha)
    want = KERNEL_NORM_P[key]
    assert abs(power_kernel_norm_oracle(c, space) - want) <= 1e-9 * want
    assert abs(power_kernel_norm_closed_form(c, space) - want) <= 1e-11 * want


def test_oracle_truncation_self_consistency():
    space = SpaceParams(4, 1)
    c = 0.9 * space.critical_exponent
    a = power_kernel_norm_oracle(c, space, terms=4096)
    b = power_kernel_norm_oracle(c, space, terms=8192)
    assert abs(a - b) < 1e-10


def test_oracle_blows_up_near_critical():
    space = SpaceParams(2, 0)
    vals = [power_kernel_norm_oracle(1 - 10.0 ** -k, space) for k in (1, 2, 3, 4)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 100
    with pytest.raises(ValueError):
        power_kernel_norm_oracle(1.0, space)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 0), (4, 0), (5, 1), (3, 2.5)]), st.floats(0.0, 0.98), st.floats(0.0, 0.98))
def test_oracle_increasing_in_c(pa, u, v):
    space = SpaceParams(*pa)
    lo, hi = sorted((u, v))
    if hi - lo < 1e-3:
        return
    cs = space.critical_exponent
    assert power_kernel_norm_oracle(lo * cs, space) < power_kernel_norm_oracle(hi * cs, space)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 30.0))
def test_gamma_recursion(x):
    assert abs(gamma(x + 1) - x * gamma(x)) <= 1e-12 * gamma(x + 1)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.02, 0.98))
def test_reflection_formula(x):
    assert abs(gamma(x) * gamma(1 - x) - math.pi / math.sin(math.pi * x)) <= 1e-12 * gamma(x) * gamma(1 - x)
