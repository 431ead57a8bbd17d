import math

import numpy as np
import pytest

from src.detsys import (
    classify_response,
    detect_orbit,
    equilibrium_state,
    find_equilibrium,
    hh_rhs,
    integrate_det,
    upcrossings,
)
from src.errors import NoBracket, NoOscillation, StepOutOfRange
from src.gating import F_infty
from src.model import ConstantSignal, ResponseRegime, SinusoidSignal


def _kicked(c: float, kick: float) -> np.ndarray:
    start = find_equilibrium(c).as_array()
    start[0] += kick
    return start


@pytest.mark.parametrize("c", [-5.0, 0.0, 6.0, 15.0, 30.0])
def test_equilibrium_is_rest_point(c):
    rest = find_equilibrium(c)
    assert np.linalg.norm(hh_rhs(0.0, rest, ConstantSignal(c=c))) < 1e-8


def test_rhs_components():
    assert hh_rhs(0.0, (0.0, 1.0, 0.05, 0.6), ConstantSignal(c=0.0))[1] == pytest.approx(-0.125, rel=1e-14)
    rhs = hh_rhs(0.0, equilibrium_state(0.0), ConstantSignal(c=0.0))
    assert rhs[0] == pytest.approx(-F_infty(0.0), rel=1e-12)
    assert rhs[0] == pytest.approx(0.0533, abs=1e-3)
    np.testing.assert_allclose(rhs[1:], 0.0, atol=1e-15)


def test_find_equilibrium_at_zero():
    rest = find_equilibrium(0.0)
    assert abs(F_infty(rest.v)) < 1e-10
    assert 0.0 < rest.v < 0.5


def test_find_equilibrium_inverts_F_infty():
    assert find_equilibrium(F_infty(7.0)).v == pytest.approx(7.0, abs=1e-9)
    assert find_equilibrium(26.61).v == pytest.approx(10.0, abs=0.05)


@pytest.mark.parametrize("c", [1e4, -1e4])
def test_find_equilibrium_without_bracket(c):
    with pytest.raises(NoBracket):
        find_equilibrium(c)


@pytest.mark.parametrize("dt", [0.02, 0.0, -1e-3])
def test_integrate_rejects_step(dt):
    with pytest.raises(StepOutOfRange):
        integrate_det(equilibrium_state(0.0), ConstantSignal(c=0.0), 1.0, dt)


def test_rest_stays_put():
    rest = find_equilibrium(0.0)
    trajectory = integrate_det(rest, ConstantSignal(c=0.0), 100.0, 1e-2)
    assert len(trajectory) == 10001
    assert np.max(np.abs(trajectory.states - rest.as_array())) < 1e-6


def test_kicked_rest_converges_in_step():
    start = _kicked(0.0, 2.0)
    coarse = integrate_det(start, ConstantSignal(c=0.0), 50.0, 1e-2)
    fine = integrate_det(start, ConstantSignal(c=0.0), 50.0, 5e-3)
    assert abs(coarse.v[-1] - fine.v[-1]) < 1e-5


def test_observed_order_of_accuracy():
    start = _kicked(15.0, 1.0)
    signal = ConstantSignal(c=15.0)
    runs = [integrate_det(start, signal, 30.0, dt) for dt in (0.01, 0.005, 0.0025)]
    v = [run.v[::stride] for run, stride in zip(runs, (1, 2, 4))]
    e1 = np.max(np.abs(v[0] - v[1]))
    e2 = np.max(np.abs(v[1] - v[2]))
    assert math.log2(e1 / e2) >= 3.5


def test_orbit_at_fifteen(orbit15):
    assert orbit15.period == pytest.approx(12.56, abs=0.1)
    assert orbit15.converged
    assert orbit15.superposition_error < 1e-3
    assert abs(len(orbit15.orbit_samples) - orbit15.period / 1e-3) <= 2
    assert np.all(np.diff(orbit15.section_crossings) > 0)


def test_no_orbit_at_rest():
    with pytest.raises(NoOscillation):
        detect_orbit(ConstantSignal(c=0.0), transient=40.0, horizon=100.0, dt=1e-2)


@pytest.fixture(scope="module")
def spiking():
    return integrate_det(_kicked(15.0, 1.0), ConstantSignal(c=15.0), 150.0, 1e-2)


def test_period_does_not_depend_on_section(spiking):
    periods = []
    for level in (-1.0, 0.0, 1.0):
        crossings = upcrossings(spiking.times, spiking.v, level, after=60.0)
        periods.append(np.mean(np.diff(crossings[-5:])))
    assert max(periods) - min(periods) < 2e-3


def test_upcrossings_interpolate():
    times = np.array([0.0, 1.0, 2.0, 3.0])
    values = np.array([-1.0, 1.0, -1.0, 3.0])
    np.testing.assert_allclose(upcrossings(times, values), [0.5, 2.25])
    np.testing.assert_allclose(upcrossings(times, values, after=1.0), [2.25])
    assert upcrossings(times, values, level=5.0).size == 0


def test_weak_sinusoid_stays_subthreshold(sinusoid):
    summary = classify_response(sinusoid, transient=50.0, periods=10)
    assert summary.regime is ResponseRegime.SUBTHRESHOLD
    assert summary.spikes_per_period == 0.0


def test_strong_sinusoid_spikes():
    summary = classify_response(SinusoidSignal(a=20.0, period=20.0), transient=50.0, periods=10)
    assert summary.regime is not ResponseRegime.SUBTHRESHOLD
    assert summary.spikes_per_period > 0
