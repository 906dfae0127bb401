"""Session-wide caches for the expensive end-to-end reports."""

import math

import numpy as np
import pytest

from bergman_workbench.bergman import ComplexFunction
from bergman_workbench.essnorm import interchange_report, two_direction_quantities
from bergman_workbench.operators import (
    cubic_two_direction_family,
    hilbert_family,
    phase_family,
    square_family,
    volterra_family,
)
from bergman_workbench.special import SpaceParams

GP_POLE = ComplexFunction(
    lambda z: 1 / (1 - np.asarray(z, dtype=complex)),
    lambda z: 1 / (1 - np.asarray(z, dtype=complex)) ** 2,
    frozenset({1 + 0j}),
    "1/(1-w)",
)


def _one(t):
    return 1.0


def _pi_t(t):
    return math.pi * t


def _half(t):
    return 0.5


def _phase_weight(t):
    return complex(math.cos(math.pi * t), math.sin(math.pi * t))


@pytest.fixture(scope="session")
def hilbert_reports():
    return {pa: interchange_report(hilbert_family(1.0), 1, SpaceParams(*pa)) for pa in ((5, 0), (6, 1))}


@pytest.fixture(scope="session")
def volterra_report():
    return interchange_report(volterra_family(GP_POLE, 1.0), 1, SpaceParams(4, 0))


@pytest.fixture(scope="session")
def square_report():
    space = SpaceParams(4, 0)
    return interchange_report(square_family(_one, space), 1, space)


@pytest.fixture(scope="session")
def phase_report():
    return interchange_report(phase_family(hilbert_family(1.0), _pi_t), 1, SpaceParams(5, 0))


@pytest.fixture(scope="session")
def twodir_reports():
    space = SpaceParams(2, 0)
    return {
        name: two_direction_quantities(cubic_two_direction_family(_half, weight), 0.5, space)
        for name, weight in (("collinear", _one), ("phase", _phase_weight))
    }
