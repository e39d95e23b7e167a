import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from congestion1d.pressure import (
    PressureParams,
    background_pressure,
    background_pressure_derivative,
    energy_density_gamma,
    invert_singular_pressure,
    singular_pressure,
    singular_pressure_derivative,
)

from .oracles import bisect_inverse, gamma_quad

P = PressureParams(1e-4, 2, 2, 2)
PARAM_GRID = [
    PressureParams(e, a, b, 2)
    for e, a, b in itertools.product([1e-2, 1e-4, 1e-6], [0, 1, 2], [1, 2, 3])
]


def test_params_validation():
    for bad in [(0, 2, 2, 2), (1e-4, -1, 2, 2), (1e-4, 2, 0, 2), (1e-4, 2, 2, 1)]:
        with pytest.raises(ValueError):
            PressureParams(*bad)


@pytest.mark.parametrize("z, expected", [(0.0, 0.0), (1.0, 1.0), (0.5, 0.25)])
def test_background_pressure(z, expected):
    assert background_pressure(z, P) == expected


@pytest.mark.parametrize("z, expected", [(0.0, 0.0), (1.0, 2.0), (0.7, 1.4)])
def test_background_pressure_derivative(z, expected):
    assert background_pressure_derivative(z, P) == pytest.approx(expected, rel=1e-15)


def test_background_pressure_domain():
    with pytest.raises(ValueError):
        background_pressure(1.1, P)
    with pytest.raises(ValueError):
        background_pressure(-0.1, P)


def test_singular_pressure_examples():
    assert singular_pressure(0.0, P) == 0.0
    assert singular_pressure(0.5, P) == pytest.approx(1e-4, rel=1e-15)
    # extended precision: 1e-4 * 0.81 / 0.01
    assert singular_pressure(0.9, P) == pytest.approx(8.1e-3, rel=1e-13)


@pytest.mark.parametrize("z", [1.0, 1.5, -0.1])
def test_singular_pressure_domain(z):
    with pytest.raises(ValueError):
        singular_pressure(z, P)


def test_singular_pressure_derivative_examples():
    assert singular_pressure_derivative(0.0, P) == 0.0
    assert singular_pressure_derivative(0.5, P) == pytest.approx(8e-4, rel=1e-14)
    h = 1e-7
    fd = (singular_pressure(0.5 + h, P) - singular_pressure(0.5 - h, P)) / (2 * h)
    assert fd == pytest.approx(8e-4, rel=1e-6)
    with pytest.raises(ValueError):
        singular_pressure_derivative(1.0, P)


@pytest.mark.parametrize("params", PARAM_GRID, ids=str)
def test_derivative_matches_central_differences(params):
    z = np.linspace(0.01, 0.99, 99)
    h = 1e-6 * np.minimum(z, 1 - z)
    fd = (singular_pressure(z + h, params) - singular_pressure(z - h, params)) / (2 * h)
    np.testing.assert_allclose(singular_pressure_derivative(z, params), fd, rtol=1e-6)


def test_derivative_positive_inside():
    z = np.linspace(1e-6, 1 - 1e-6, 1001)
    for params in PARAM_GRID:
        assert np.all(singular_pressure_derivative(z, params) > 0)


def test_invert_examples():
    assert invert_singular_pressure(0.0, P) == 0.0
    assert invert_singular_pressure(1e-4, P) == pytest.approx(0.5, abs=1e-15)
    assert invert_singular_pressure(8.1e-3, P) == pytest.approx(0.9, abs=1e-13)
    with pytest.raises(ValueError):
        invert_singular_pressure(-1e-3, P)


@pytest.mark.parametrize(
    "params", [p for p in PARAM_GRID if not (p.alpha == 2 and p.beta == 2)], ids=str
)
def test_invert_matches_bisection_oracle(params):
    zs = [0.05, 0.3, 0.7, 0.95, 0.999]
    for z in zs:
        target = singular_pressure(z, params)
        assert invert_singular_pressure(target, params) == pytest.approx(
            bisect_inverse(target, params.epsilon, params.alpha, params.beta), abs=1e-13
        )


def test_invert_alpha_zero_below_range():
    p = PressureParams(1e-4, 0, 2, 2)
    assert invert_singular_pressure(0.5e-4, p) == 0.0


def test_invert_never_reaches_one():
    for params in PARAM_GRID:
        z = invert_singular_pressure(np.array([1e10, 1e30, 1e300, np.inf]), params)
        assert np.all(z < 1.0)


@pytest.mark.parametrize("params", PARAM_GRID, ids=str)
def test_roundtrip_dense(params):
    z = np.linspace(0.0, 1 - 1e-8, 2000)
    back = invert_singular_pressure(singular_pressure(z, params), params)
    assert np.max(np.abs(back - z)) <= 1e-12


def test_epsilon_scaling_exact():
    z = np.linspace(0, 0.999, 500)
    for e in [1e-2, 1e-4, 1e-6]:
        for a, b in [(0, 1), (1, 2), (2, 2), (2, 3)]:
            assert np.array_equal(
                singular_pressure(z, PressureParams(e, a, b, 2)),
                e * singular_pressure(z, PressureParams(1.0, a, b, 2)),
            )


@given(st.floats(0.0, 0.999), st.floats(0.0, 0.999))
def test_monotone(z1, z2):
    z1, z2 = sorted((z1, z2))
    if z1 < z2 and z1 > 0:
        assert singular_pressure(z1, P) < singular_pressure(z2, P)
    assert background_pressure(z1, P) <= background_pressure(z2, P)


def test_gamma_examples():
    assert energy_density_gamma(0.0, P) == 0.0
    assert energy_density_gamma(0.5, P) == pytest.approx(0.5001, abs=1e-12)
    assert energy_density_gamma(0.9, P) == pytest.approx(0.9009, abs=1e-12)


def test_gamma_closed_form_vs_quadrature():
    for z in np.linspace(0.01, 0.99, 25):
        assert energy_density_gamma(z, P) == pytest.approx(gamma_quad(z, 1e-4, 2, 2, 2), abs=1e-10)


@pytest.mark.parametrize("params", [PressureParams(1e-3, 3, 2, 2), PressureParams(1e-2, 2, 3, 1.5)])
def test_gamma_general_quadrature(params):
    for z in [0.1, 0.5, 0.9]:
        expected = gamma_quad(z, params.epsilon, params.alpha, params.beta, params.gamma)
        assert energy_density_gamma(z, params) == pytest.approx(expected, rel=1e-9)


def test_gamma_rejects():
    with pytest.raises(ValueError):
        energy_density_gamma(1.0, P)
    with pytest.raises(ValueError):
        energy_density_gamma(0.5, PressureParams(1e-4, 1, 2, 2))
