"""受控 (ξHH)：以光滑控制 h 代替 Brown 路径

选取 ḣ 使第五个坐标沿 Ĩ_s = ζ0 + ∫₀ˢ S̃ 运动，前四个坐标即为 S̃ 驱动的 (HH) 解。
"""
import logging
import math

import numpy as np
from scipy.integrate import simpson

from src.detsys import check_step, step_count
from src.errors import DomainError
from src.gating import RateKind, current_F, gating_drift
from src.model import ControlledTrajectory, ControlProblem

logger = logging.getLogger(__name__)


def control_h_dot(problem: ControlProblem, s: float) -> float:
    """ḣ(s) = [S̃(s) + (Ĩ_s - S(s))τ + ½d'd(Ĩ_s)] / (γ q(Ĩ_s) √τ)"""
    spec = problem.spec
    level = float(problem.integrator(s))
    scale = spec.gamma * spec.q(level) * math.sqrt(spec.tau)
    if scale == 0.0:
        raise DomainError(f"the control is undefined at s = {s}: γ q(Ĩ_s) vanishes")
    numerator = (problem.target_signal(s) + (level - problem.driving_signal(s)) * spec.tau
                 + spec.stratonovich_shift(level))
    return numerator / scale


def _controlled_rhs(problem: ControlProblem, s: float, x: tuple) -> tuple:
    v, n, m, h, zeta = x
    spec = problem.spec
    push = spec.d(zeta) * control_h_dot(problem, s)
    pull = (problem.driving_signal(s) - zeta) * spec.tau - spec.stratonovich_shift(zeta)
    return (
        pull - current_F((v, n, m, h)) + push,
        gating_drift(RateKind.N, v, n),
        gating_drift(RateKind.M, v, m),
        gating_drift(RateKind.H, v, h),
        pull + push,
    )


def integrate_controlled(problem: ControlProblem, dt: float = 1e-3) -> ControlledTrajectory:
    """五维受控系统的 RK4 积分"""
    check_step(dt)
    n_steps = step_count(problem.horizon, dt)
    states = np.empty((n_steps + 1, 5))
    states[0] = problem.start.as_array()
    x = tuple(float(c) for c in states[0])
    half = 0.5 * dt
    for i in range(n_steps):
        s = i * dt
        k1 = _controlled_rhs(problem, s, x)
        k2 = _controlled_rhs(problem, s + half, tuple(a + half * b for a, b in zip(x, k1)))
        k3 = _controlled_rhs(problem, s + half, tuple(a + half * b for a, b in zip(x, k2)))
        k4 = _controlled_rhs(problem, s + dt, tuple(a + dt * b for a, b in zip(x, k3)))
        x = tuple(a + dt / 6.0 * (p + 2.0 * q + 2.0 * r + w) for a, p, q, r, w in zip(x, k1, k2, k3, k4))
        states[i + 1] = x
    logger.debug("integrated the controlled system over %g ms in %d steps", problem.horizon, n_steps)
    return ControlledTrajectory(times=dt * np.arange(n_steps + 1), states=states)


def control_energy(problem: ControlProblem, samples: int = 2001) -> float:
    """奇数网格上用 Simpson 求 ∫₀^horizon ḣ² ds"""
    s = np.linspace(0.0, problem.horizon, samples)
    values = np.array([control_h_dot(problem, x) ** 2 for x in s])
    return float(simpson(values, x=s))
