import logging

import numpy as np
from scipy.interpolate import CubicSpline

from src.detsys.equilibrium import find_equilibrium
from src.detsys.integrate import integrate_det
from src.errors import NoOscillation
from src.model import OrbitSummary, ResponseRegime, ResponseSummary, Trajectory4

logger = logging.getLogger(__name__)

MIN_CROSSINGS = 5
SUPERPOSITION_TOL = 1e-3


def upcrossings(times: np.ndarray, values: np.ndarray, level: float = 0.0, after: float = -np.inf) -> np.ndarray:
    """上穿 level 的时刻，步间线性插值"""
    below = values[:-1] < level
    above = values[1:] >= level
    index = np.nonzero(below & above)[0]
    t0, t1 = times[index], times[index + 1]
    y0, y1 = values[index], values[index + 1]
    crossing = t0 + (level - y0) / (y1 - y0) * (t1 - t0)
    return crossing[crossing > after]


def loop_distance(trajectory: Trajectory4, first: tuple[float, float], second: tuple[float, float],
                  samples: int = 4000) -> float:
    """两圈按相同相位重采样后的 sup 距离"""
    spline = CubicSpline(trajectory.times, trajectory.states, axis=0)
    phase = np.linspace(0.0, 1.0, samples, endpoint=False)
    a = spline(first[0] + phase * (first[1] - first[0]))
    b = spline(second[0] + phase * (second[1] - second[0]))
    return float(np.max(np.linalg.norm(a - b, axis=1)))


def detect_orbit(signal, transient: float = 60.0, horizon: float = 200.0, dt: float = 1e-3,
                 kick: float = 1.0, section: float = 0.0) -> OrbitSummary:
    """从平均水平的平衡点出发（v 加一个小扰动），用 v 上穿截面测周期"""
    rest = find_equilibrium(signal.mean())
    start = rest.as_array()
    start[0] += kick
    trajectory = integrate_det(start, signal, horizon, dt)
    crossings = upcrossings(trajectory.times, trajectory.v, section, after=transient)
    logger.debug("found %d section crossings after %g ms", len(crossings), transient)
    if len(crossings) < MIN_CROSSINGS:
        raise NoOscillation(f"only {len(crossings)} upcrossings of v = {section} after {transient} ms")
    period = float(np.mean(np.diff(crossings[-MIN_CROSSINGS:])))

    # 只在最后两圈附近拟合样条，避免对整条轨迹插值
    window = (trajectory.times >= crossings[-3] - 2 * dt) & (trajectory.times <= crossings[-1] + 2 * dt)
    local = Trajectory4(times=trajectory.times[window], states=trajectory.states[window], signal=signal, step=dt)
    error = loop_distance(local, (crossings[-3], crossings[-2]), (crossings[-2], crossings[-1]))

    last = (trajectory.times >= crossings[-2]) & (trajectory.times < crossings[-1])
    samples = Trajectory4(times=trajectory.times[last], states=trajectory.states[last], signal=signal, step=dt)
    logger.info("orbit period %.6g ms, loop superposition error %.3e", period, error)
    return OrbitSummary(
        period=period,
        section_crossings=crossings.tolist(),
        orbit_samples=samples,
        converged=error < SUPERPOSITION_TOL,
        superposition_error=error,
    )


def classify_response(signal, transient: float = 100.0, periods: int = 20, dt: float = 1e-2,
                      max_multiple: int = 4, tol: float = 1e-2) -> ResponseSummary:
    """频闪采样 X_{kT} 判断响应类型"""
    rest = find_equilibrium(signal.mean())
    period = signal.period
    warmup = int(np.ceil(transient / period))
    per_period = int(np.ceil(period / dt - 1e-9))
    dt = period / per_period
    total = (warmup + periods) * per_period
    trajectory = integrate_det(rest, signal, total * dt, dt)
    strobe = trajectory.states[warmup * per_period::per_period]
    spikes = upcrossings(trajectory.times, trajectory.v, 0.0, after=warmup * period)
    spikes_per_period = len(spikes) / periods

    spread = np.inf
    lock_multiple = None
    for k in range(1, max_multiple + 1):
        gaps = np.linalg.norm(strobe[k:] - strobe[:-k], axis=1)
        if gaps.size:
            spread = min(spread, float(np.max(gaps[-periods // 2:])))
        if gaps.size and np.max(gaps[-periods // 2:]) < tol:
            lock_multiple = k
            break

    if len(spikes) == 0:
        regime = ResponseRegime.SUBTHRESHOLD
    elif lock_multiple == 1:
        regime = ResponseRegime.PHASE_LOCKED
    elif lock_multiple is not None:
        regime = ResponseRegime.MULTI_PERIODIC
    else:
        regime = ResponseRegime.IRREGULAR
    logger.info("response to %s: %s (%.3g spikes per period)", signal.kind, regime.value, spikes_per_period)
    return ResponseSummary(
        regime=regime,
        lock_multiple=lock_multiple,
        spikes_per_period=spikes_per_period,
        stroboscopic_spread=spread if np.isfinite(spread) else 0.0,
    )
