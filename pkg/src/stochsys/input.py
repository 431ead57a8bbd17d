"""输入扩散 ξ：OU 精确转移与 full-truncation CIR Euler 步

两种格式都推进辅助状态：OU 为 ξ 本身，CIR 为 ξ̃ = ξ + K。
CIR 漂移用未截断的 ξ̃，扩散用 ξ̃ ∨ 0，输出状态为 (ξ̃ ∨ 0) - K。
"""
import logging
import math

import numpy as np

from src.errors import DomainError, StepOutOfRange
from src.model import CIRInput, OUInput
from src.stochsys.rng import RngStream, stream_normals

logger = logging.getLogger(__name__)


class InputScheme:
    """一步推进规则，作用于形状 (P,) 的辅助状态"""

    def __init__(self, spec, signal, dt: float):
        self.spec = spec
        self.signal = signal
        self.dt = dt
        match spec:
            case OUInput():
                self.shift = 0.0
                self.decay = math.exp(-spec.tau * dt)
                self.noise = spec.gamma * math.sqrt(-math.expm1(-2.0 * spec.tau * dt) / 2.0)
            case CIRInput():
                self.shift = spec.K
                self.noise = spec.gamma * math.sqrt(spec.tau) * math.sqrt(dt)
            case _:
                raise TypeError(f"unsupported input diffusion {type(spec).__name__}")

    def to_aux(self, zeta):
        return np.asarray(zeta, dtype=float) + self.shift

    def report(self, aux):
        if self.shift == 0.0:
            return aux
        return np.maximum(aux, 0.0) - self.shift

    def step(self, aux: np.ndarray, t: float, z: np.ndarray) -> np.ndarray:
        if isinstance(self.spec, OUInput):
            return aux * self.decay + self.signal.relaxation_integral(t, self.dt, self.spec.tau) + self.noise * z
        target = self.signal(t) + self.shift
        return aux + (target - aux) * self.spec.tau * self.dt + self.noise * np.sqrt(np.maximum(aux, 0.0)) * z


def check_input_start(spec, signal, zeta0, dt: float, t_end: float) -> None:
    spec.validate_signal(signal)
    if not spec.contains(zeta0):
        raise DomainError(f"initial input state {zeta0} lies outside the state interval (lower end {spec.lower_bound})")
    if not 0.0 < dt <= t_end:
        raise StepOutOfRange(f"step must lie in (0, {t_end}], got {dt}")


def _run(scheme: InputScheme, zeta0: np.ndarray, normals: np.ndarray, t0: float, record_every: int) -> np.ndarray:
    n_paths, n_steps = normals.shape
    aux = scheme.to_aux(np.broadcast_to(zeta0, (n_paths,))).copy()
    values = [scheme.report(aux).copy()]
    for k in range(n_steps):
        aux = scheme.step(aux, t0 + k * scheme.dt, normals[:, k])
        if (k + 1) % record_every == 0:
            values.append(scheme.report(aux).copy())
    return np.stack(values, axis=1)


def simulate_input_ensemble(spec, signal, zeta0, t_end: float, dt: float, seed: int, trials: int,
                            t0: float = 0.0, record_every: int = 1, first_stream: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """trials 条 ξ 路径；第 i 条使用 RngStream(seed, first_stream + i)。返回 (times, (trials, N))"""
    check_input_start(spec, signal, zeta0, dt, t_end)
    n_steps = max(1, int(round(t_end / dt)))
    scheme = InputScheme(spec, signal, dt)
    normals = stream_normals(seed, first_stream, trials, n_steps)
    values = _run(scheme, np.asarray(zeta0, dtype=float), normals, t0, record_every)
    times = t0 + dt * np.arange(0, n_steps + 1, record_every)
    logger.debug("simulated %d input paths of %d steps", trials, n_steps)
    return times, values


def simulate_input(spec, signal, zeta0: float, t_end: float, dt: float, rng: RngStream,
                   t0: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """单条 ξ 路径 (times, values)"""
    times, values = simulate_input_ensemble(spec, signal, zeta0, t_end, dt, rng.seed, 1, t0,
                                            first_stream=rng.stream_id)
    return times, values[0]


def _grid_step(signal, dt: float) -> tuple[float, int]:
    per_period = max(1, int(np.ceil(signal.period / dt - 1e-9)))
    return signal.period / per_period, per_period


def grid_chain_ensemble(spec, signal, zeta0, k: int, seed: int, trials: int, dt: float = 0.01,
                        first_stream: int = 0) -> np.ndarray:
    """ξ 在 0, T, ..., kT 处的 (trials, k+1) 样本"""
    if k < 1:
        raise DomainError(f"the grid chain needs k >= 1, got {k}")
    step, per_period = _grid_step(signal, dt)
    _, values = simulate_input_ensemble(spec, signal, zeta0, k * signal.period, step, seed, trials,
                                        record_every=per_period, first_stream=first_stream)
    return values


def grid_chain(spec, signal, zeta0: float, k: int, rng: RngStream, dt: float = 0.01) -> np.ndarray:
    """ξ 在 0, T, 2T, …, kT 处的取值"""
    return grid_chain_ensemble(spec, signal, zeta0, k, rng.seed, 1, dt, first_stream=rng.stream_id)[0]
