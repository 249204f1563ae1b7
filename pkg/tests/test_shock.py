import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shockfront.errors import NoIncidentShock, NoShock, OrientationError
from shockfront.gas import GasModel, sound_speed
from shockfront.shock import (
    FlowState, downstream_state, incident_shock, shock_residual, tangential_mismatch,
    vertical_incident_shock,
)
from shockfront.vec import rotate, vec


def brute_downstream_density(gamma, rho_u, zn_u):
    """Scan in log density for the nontrivial root, then bisect."""

    def pot(rho):
        return np.log(rho) if gamma == 1.0 else (rho ** (gamma - 1) - 1) / (gamma - 1)

    def F(rho):
        return pot(rho) - pot(rho_u) - 0.5 * (zn_u ** 2 - (rho_u * zn_u / rho) ** 2)

    grid = rho_u * np.exp(np.linspace(1e-9, 60.0, 20001))
    vals = F(grid)
    k = int(np.argmax((vals[:-1] < 0.0) & (vals[1:] >= 0.0))) + 1
    lo, hi = grid[k - 1], grid[k]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if F(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("gamma", [1.0, 1.4, 5 / 3])
def test_downstream_matches_brute_force(gamma):
    gas = GasModel(gamma)
    rng = np.random.default_rng(int(gamma * 1000))
    for _ in range(100):
        rho_u = float(np.exp(rng.uniform(-2, 2)))
        c_u = sound_speed(gas, rho_u)
        mach = float(rng.uniform(1.01, 6.0))
        ang = float(rng.uniform(0, 2 * math.pi))
        n = vec(math.cos(ang), math.sin(ang))
        xi = vec(rng.normal(size=2))
        zt = float(rng.normal())
        v_u = xi + mach * c_u * n + zt * np.array([-n[1], n[0]])
        sol = downstream_state(gas, FlowState(rho_u, v_u), xi, n)
        ref = brute_downstream_density(gamma, rho_u, mach * c_u)
        assert sol.downstream.rho == pytest.approx(ref, rel=1e-8)


normals = st.floats(0, 2 * math.pi)
machs = st.floats(1.0001, 4.0)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([1.0, 1.2, 1.4, 5 / 3, 3.0]), st.floats(0.05, 20), machs, normals,
       st.floats(-3, 3))
def test_rankine_hugoniot_residuals(gamma, rho_u, mach, ang, zt):
    gas = GasModel(gamma)
    n = vec(math.cos(ang), math.sin(ang))
    c_u = sound_speed(gas, rho_u)
    v_u = mach * c_u * n + zt * np.array([-n[1], n[0]])
    sol = downstream_state(gas, FlowState(rho_u, v_u), (0.0, 0.0), n)
    mass, bern = shock_residual(gas, sol)
    scale = max(1.0, rho_u * mach * c_u)
    assert abs(mass) < 1e-10 * scale
    assert abs(bern) < 1e-10 * max(1.0, (mach * c_u) ** 2)
    assert abs(tangential_mismatch(sol)) < 1e-12 * max(1.0, abs(zt))
    # admissibility: compressive, normal-subsonic downstream
    assert sol.downstream.rho > rho_u
    assert sol.zn_d < sound_speed(gas, sol.downstream.rho)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([1.0, 1.4, 5 / 3]), machs, normals, st.floats(-2, 2), st.floats(-2, 2),
       st.floats(-2, 2), st.floats(0, 2 * math.pi))
def test_galilean_and_rotation_invariance(gamma, mach, ang, wx, wy, zt, rot):
    gas = GasModel(gamma)
    n = vec(math.cos(ang), math.sin(ang))
    v_u = mach * n + zt * np.array([-n[1], n[0]])
    xi = vec(0.3, -0.2)
    base = downstream_state(gas, FlowState(1.0, v_u + xi), xi, n)

    w = vec(wx, wy)
    shifted = downstream_state(gas, FlowState(1.0, v_u + xi + w), xi + w, n)
    assert shifted.downstream.rho == pytest.approx(base.downstream.rho, rel=1e-12)
    assert np.allclose(shifted.downstream.v - w, base.downstream.v, rtol=0, atol=1e-12 * max(1, abs(wx) + abs(wy) + mach))

    rotated = downstream_state(gas, FlowState(1.0, rotate(v_u + xi, rot)), rotate(xi, rot), rotate(n, rot))
    assert rotated.downstream.rho == pytest.approx(base.downstream.rho, rel=1e-12)
    assert np.allclose(rotated.downstream.v, rotate(base.downstream.v, rot), rtol=0, atol=1e-12 * (1 + mach))


def test_orientation_and_subsonic_errors():
    gas = GasModel(1.4)
    up = FlowState(1.0, (2.0, 0.0))
    with pytest.raises(OrientationError):
        downstream_state(gas, up, (0.0, 0.0), (-1.0, 0.0))
    with pytest.raises(NoShock):
        downstream_state(gas, FlowState(1.0, (0.5, 0.0)), (0.0, 0.0), (1.0, 0.0))


def test_normal_sonic_upstream_is_vanishing():
    gas = GasModel(5 / 3)
    sol = downstream_state(gas, FlowState(1.0, (1.0, 0.3)), (0.0, 0.0), (1.0, 0.0))
    assert sol.vanishing
    assert sol.downstream.rho == 1.0


# (gamma, M_I) -> (xi_s, rho_Q) from a 40-digit root of the incident jump conditions
INCIDENT_ORACLE = {
    (5 / 3, 1.0): (1.3717954580847197, 0.2710283489375413),
    (1.4, 1.0): (1.4420809767671058, 0.306557664853311),
    (4 / 3, 2.0): (2.0539941855139981, 0.026287409134260237),
    (1.4, 0.5): (1.2101062809378848, 0.58681315197167778),
}


@pytest.mark.parametrize("key", list(INCIDENT_ORACLE))
def test_vertical_incident_shock_oracle(key):
    gamma, mach = key
    xi_s, rho_q = INCIDENT_ORACLE[key]
    inc = vertical_incident_shock(GasModel(gamma), mach)
    assert inc.xi_s == pytest.approx(xi_s, rel=1e-13)
    assert inc.rho_Q == pytest.approx(rho_q, rel=1e-12)
    assert np.array_equal(inc.v_Q, [0.0, 0.0])


@pytest.mark.parametrize("gamma", [1.2, 1.4, 5 / 3, 3.0])
def test_incident_shock_existence_threshold(gamma):
    gas = GasModel(gamma)
    limit = math.sqrt(2 / (gamma - 1))
    assert vertical_incident_shock(gas, 0.999 * limit).rho_Q > 0.0
    with pytest.raises(NoIncidentShock):
        vertical_incident_shock(gas, 1.001 * limit)


def test_isothermal_incident_shock_always_exists():
    inc = vertical_incident_shock(GasModel(1.0), 10.0)
    assert 0.0 < inc.rho_Q < 1e-20


def test_incident_shock_residuals():
    gas = GasModel(5 / 3)
    inc = vertical_incident_shock(gas, 1.0)
    sol = inc.solution_at(gas, (inc.xi_s, 0.7))
    assert sol.downstream.rho == pytest.approx(1.0, rel=1e-13)
    assert np.allclose(sol.downstream.v, [1.0, 0.0], atol=1e-13)


def test_oblique_incident_shock_keeps_tangential_velocity():
    gas = GasModel(1.4)
    theta, beta_q = math.radians(60), math.radians(10)
    inc = incident_shock(gas, 1.0, beta_q, theta)
    sol = inc.solution_at(gas, inc.support * inc.n)
    assert sol.downstream.rho == pytest.approx(1.0, rel=1e-12)
    assert np.allclose(sol.downstream.v, inc.v_I, atol=1e-12)
    # v_Q slides along wall B
    assert abs(inc.v_Q[0] * math.sin(theta) - inc.v_Q[1] * math.cos(theta)) < 1e-14
