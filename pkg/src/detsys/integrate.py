import logging

import numpy as np

from src.errors import StateEscape, StepOutOfRange
from src.gating import all_rates, current_F
from src.model import State4, Trajectory4

logger = logging.getLogger(__name__)

MAX_DET_STEP = 0.01


def hh_rhs(t: float, s, signal) -> np.ndarray:
    """(S(t) - F(s), G_n, G_m, G_h)"""
    v, n, m, h = s.as_array() if isinstance(s, State4) else s
    return np.array(_rhs(t, v, n, m, h, signal))


def _rhs(t, v, n, m, h, signal):
    an, bn, am, bm, ah, bh = all_rates(v)
    dv = signal(t) - current_F((v, n, m, h))
    return dv, an * (1.0 - n) - bn * n, am * (1.0 - m) - bm * m, ah * (1.0 - h) - bh * h


def check_step(dt: float, upper: float = MAX_DET_STEP) -> None:
    if not 0.0 < dt <= upper:
        raise StepOutOfRange(f"step must lie in (0, {upper}], got {dt}")


def step_count(t_end: float, dt: float) -> int:
    if t_end <= 0:
        raise StepOutOfRange(f"horizon must be positive, got {t_end}")
    return max(1, int(round(t_end / dt)))


def integrate_det(s0, signal, t_end: float, dt: float, t0: float = 0.0) -> Trajectory4:
    """经典四阶 Runge-Kutta，固定步长"""
    check_step(dt)
    n_steps = step_count(t_end, dt)
    states = np.empty((n_steps + 1, 4))
    states[0] = s0.as_array() if isinstance(s0, State4) else s0
    v, n, m, h = (float(x) for x in states[0])
    half = 0.5 * dt
    for i in range(n_steps):
        t = t0 + i * dt
        k1 = _rhs(t, v, n, m, h, signal)
        k2 = _rhs(t + half, v + half * k1[0], n + half * k1[1], m + half * k1[2], h + half * k1[3], signal)
        k3 = _rhs(t + half, v + half * k2[0], n + half * k2[1], m + half * k2[2], h + half * k2[3], signal)
        k4 = _rhs(t + dt, v + dt * k3[0], n + dt * k3[1], m + dt * k3[2], h + dt * k3[3], signal)
        v += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        n += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        m += dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        h += dt / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
        if not (0.0 < n < 1.0 and 0.0 < m < 1.0 and 0.0 < h < 1.0):
            raise StateEscape(f"gating left (0, 1) at t = {t + dt:.6g} ms: n={n}, m={m}, h={h}")
        states[i + 1] = (v, n, m, h)
    times = t0 + dt * np.arange(n_steps + 1)
    logger.debug("integrated %d RK4 steps of %g ms", n_steps, dt)
    return Trajectory4(times=times, states=states, signal=signal, step=dt)
