import numpy as np
import pytest

from congestion1d.diagnostics import constraint_report, discrete_energy, reflection_error, total_mass
from congestion1d.grid import FlowState, new_uniform_grid
from congestion1d.pressure import PressureParams
from congestion1d.scenarios import get_scenario, initialize

G = new_uniform_grid(1.0, 1000)
P = PressureParams(1e-4, 2, 2, 2)


def state(rho, u=0.0, rs=1.0):
    rho = np.broadcast_to(np.asarray(rho, float), (1000,)).copy()
    return FlowState(rho, rho * u, np.broadcast_to(np.asarray(rs, float), (1000,)).copy())


def test_total_mass():
    assert total_mass(state(0.7), G) == pytest.approx(0.7, rel=1e-14)
    assert total_mass(state(0.0), G) == 0.0
    half = np.where(G.centers < 0.5, 2.0, 0.0)
    assert total_mass(state(half, rs=3.0), G) == pytest.approx(1.0, rel=1e-14)


def test_energy():
    assert discrete_energy(state(0.0), P, G) == 0.0
    # 0.7 * (0.7 + 1e-4 * 0.7 / 0.3)
    e0 = discrete_energy(state(0.7), P, G)
    assert e0 == pytest.approx(0.49016333333333333, rel=1e-13)
    assert discrete_energy(state(0.7, u=0.8), P, G) - e0 == pytest.approx(0.224, rel=1e-12)


def test_constraint_report():
    z, i = constraint_report(initialize(get_scenario("case1"), G))
    assert z == pytest.approx(0.7, rel=1e-15)
    assert constraint_report(state(0.0)) == (0.0, None)
    rho = np.full(1000, 0.5)
    rho[123] = 1 - 1e-6
    assert constraint_report(state(rho)) == (pytest.approx(1 - 1e-6, rel=1e-15), 123)


def test_reflection_error_uniform_and_perturbed():
    s = state(0.7)
    for c in (0.6, 0.1005, 0.25):
        assert reflection_error(s, G, c) == 0.0
    s.rho[10] += 1e-3
    assert reflection_error(s, G, 0.6) >= 1e-3


def test_reflection_error_rejects_misaligned_centre():
    with pytest.raises(ValueError):
        reflection_error(state(0.7), G, 0.60025)


def test_case1_is_not_mirror_symmetric_about_0p6():
    # u = +0.8 on an arc of length 0.4 and -0.8 on one of length 0.6: no
    # reflection can map one onto the other, so the momentum defect is 2 * 0.56.
    err = reflection_error(initialize(get_scenario("case1"), G), G, 0.6)
    assert err == pytest.approx(1.12, rel=1e-12)
