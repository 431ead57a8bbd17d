import math

import numpy as np
import pytest
from pydantic import TypeAdapter, ValidationError
from scipy import integrate

from src.errors import SpecViolation
from src.model import (
    CIRInput,
    ConstantSignal,
    ControlProblem,
    OUInput,
    SignalSpec,
    SinusoidSignal,
    State4,
    State5,
    TableSignal,
    Trajectory4,
    TubeResult,
    containment_level,
    parse_signal,
)

signal_adapter = TypeAdapter(SignalSpec)


def test_state_rejects_closed_gates():
    State4(v=0.0, n=0.3, m=0.05, h=0.6)
    for gates in ({"n": 0.0, "m": 0.5, "h": 0.5}, {"n": 0.5, "m": 1.0, "h": 0.5}):
        with pytest.raises(ValidationError):
            State4(v=0.0, **gates)
    with pytest.raises(ValidationError):
        State5(v=math.nan, n=0.5, m=0.5, h=0.5, zeta=0.0)


def test_state5_projection_and_extend():
    x = State5.from_array([1.0, 0.2, 0.3, 0.4, -2.0])
    assert x.projection() == State4(v=1.0, n=0.2, m=0.3, h=0.4)
    assert State5.extend(x.projection(), -2.0) == x
    np.testing.assert_array_equal(x.as_array(), [1.0, 0.2, 0.3, 0.4, -2.0])


def test_sinusoid_is_periodic_and_integrates():
    signal = SinusoidSignal(a=2.0, period=7.0)
    t = np.linspace(0.0, 20.0, 41)
    np.testing.assert_allclose(signal(t + signal.period), signal(t), atol=1e-12)
    expected, _ = integrate.quad(signal, 1.0, 9.5)
    assert signal.integral(1.0, 9.5) == pytest.approx(expected, rel=1e-12)
    assert signal.mean() == 2.0
    assert signal.sup_abs() == 4.0


@pytest.mark.parametrize("signal", [
    ConstantSignal(c=3.0),
    SinusoidSignal(a=1.5, period=4.0),
    TableSignal(period=4.0, grid=[0.0, 1.0, 2.0, 3.0], values=[0.0, 1.0, 0.5, -1.0]),
])
def test_relaxation_integral(signal):
    tau, t, dt = 0.8, 1.3, 0.01
    expected, _ = integrate.quad(lambda u: tau * signal(u) * math.exp(-tau * (t + dt - u)), t, t + dt,
                                 epsabs=1e-15)
    assert signal.relaxation_integral(t, dt, tau) == pytest.approx(expected, rel=1e-9, abs=1e-14)


def test_table_signal_interpolates_periodically():
    signal = TableSignal(period=4.0, grid=[0.0, 1.0, 2.0, 3.0], values=[0.0, 1.0, 0.5, -1.0])
    assert signal(1.0) == pytest.approx(1.0, abs=1e-12)
    assert signal(5.0) == pytest.approx(1.0, abs=1e-12)
    assert signal(2.7) == pytest.approx(signal(2.7 + 4.0), abs=1e-12)
    assert signal.integral(0.0, 4.0) == pytest.approx(4.0 * signal.mean(), rel=1e-12)
    assert signal.sup_abs() >= 1.0


def test_table_signal_rejects_bad_grid():
    with pytest.raises(ValidationError):
        TableSignal(period=2.0, grid=[0.0, 1.0, 2.0], values=[1.0, 2.0, 3.0])
    with pytest.raises(ValidationError):
        TableSignal(period=4.0, grid=[0.0, 1.0], values=[1.0, 2.0])


def test_parse_signal():
    assert signal_adapter.validate_python(parse_signal("constant:15")) == ConstantSignal(c=15.0)
    assert signal_adapter.validate_python(parse_signal("sinusoid:1,10")) == SinusoidSignal(a=1.0, period=10.0)
    for text in ("square:1", "sinusoid:1", "constant:"):
        with pytest.raises(ValueError):
            parse_signal(text)


def test_parse_table_signal(tmp_path):
    table = tmp_path / "signal.csv"
    table.write_text("# t,S\n0,0\n1,2\n2,1\n3,0.5\n")
    signal = signal_adapter.validate_python(parse_signal(f"table:{table},4"))
    assert isinstance(signal, TableSignal)
    assert signal(1.0) == pytest.approx(2.0, abs=1e-12)


def test_diffusion_specs():
    ou = OUInput(tau=2.0, gamma=0.5)
    assert ou.lower_bound == -math.inf
    assert ou.d(3.0) == pytest.approx(0.5 * math.sqrt(2.0))
    assert ou.stratonovich_shift(1.0) == 0.0

    cir = CIRInput(tau=2.0, gamma=0.5, K=3.0)
    assert cir.lower_bound == -3.0
    assert cir.contains(np.array([-2.9, 10.0]))
    assert not cir.contains(-3.0)
    assert cir.q(-3.5) == 0.0
    assert cir.stratonovich_shift(0.0) == pytest.approx(0.25 * 0.25 * 2.0)
    # d'd 与 jet 求得的结果一致
    jet = cir.d_jet(1.0, 2)
    assert 0.5 * jet.coeffs[0] * jet.coeffs[1] == pytest.approx(cir.stratonovich_shift(1.0), rel=1e-14)


def test_cir_signal_condition():
    cir = CIRInput(tau=1.0, gamma=2.0, K=3.0)
    cir.validate_signal(ConstantSignal(c=0.5))
    with pytest.raises(SpecViolation):
        cir.validate_signal(ConstantSignal(c=1.0))
    with pytest.raises(SpecViolation):
        cir.validate_signal(SinusoidSignal(a=0.6, period=5.0))


def test_containment_level():
    states = np.array([
        [0.5, 0.5, 0.5, 0.5, 0.0],
        [-7.2, 0.5, 0.5, 0.5, 0.0],
        [0.0, 0.1, 0.5, 0.5, 0.0],
        [0.0, 0.5, 0.5, 0.5, -2.75],
        [0.0, 0.5, 0.5, 0.5, -3.0],
    ]).T
    np.testing.assert_array_equal(containment_level(states, -math.inf)[:3], [2.0, 8.0, 10.0])
    np.testing.assert_array_equal(containment_level(states, -3.0)[3:], [4.0, math.inf])


def test_trajectory_validation():
    times = np.array([0.0, 1.0, 2.0])
    states = np.tile([0.0, 0.3, 0.05, 0.6], (3, 1))
    Trajectory4(times=times, states=states, signal=ConstantSignal(c=0.0), step=1.0)
    with pytest.raises(ValidationError):
        Trajectory4(times=times[::-1], states=states, signal=ConstantSignal(c=0.0), step=1.0)
    states[1, 2] = 1.2
    with pytest.raises(ValidationError):
        Trajectory4(times=times, states=states, signal=ConstantSignal(c=0.0), step=1.0)


def test_tube_result_checks():
    result = TubeResult(hits=3, trials=10, epsilon=1.0, wilson_ci=(0.1, 0.6))
    assert result.fraction == 0.3
    with pytest.raises(ValidationError):
        TubeResult(hits=11, trials=10, epsilon=1.0, wilson_ci=(0.1, 0.6))
    with pytest.raises(ValidationError):
        TubeResult(hits=1, trials=10, epsilon=1.0, wilson_ci=(0.6, 0.1))


def test_control_problem_keeps_integrator_in_U():
    start = State5(v=0.0, n=0.3, m=0.05, h=0.6, zeta=0.0)
    spec = CIRInput(tau=1.0, gamma=0.5, K=3.0)
    problem = ControlProblem(start=start, driving_signal=ConstantSignal(c=1.0), target_signal=ConstantSignal(c=0.5),
                             spec=spec, horizon=5.0)
    assert problem.integrator(2.0) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        ControlProblem(start=start, driving_signal=ConstantSignal(c=1.0), target_signal=ConstantSignal(c=-1.0),
                       spec=spec, horizon=5.0)
