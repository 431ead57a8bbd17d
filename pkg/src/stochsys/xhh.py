"""(ξHH) 的分裂格式

每步：ξ 按输入格式推进；V 用 Euler-Maruyama，使用 ξ 的实际增量；
门控变量在冻结电压下做指数更新，把 (0, 1) 映到自身。
"""
import logging

import numpy as np

from src.errors import StateEscape
from src.gating import all_rates, current_F
from src.model import Path5, State5
from src.stochsys.input import InputScheme, check_input_start
from src.stochsys.monitors import PathMonitor, PathRecorder
from src.stochsys.rng import RngStream

logger = logging.getLogger(__name__)


def _start(x0) -> np.ndarray:
    return x0.as_array() if isinstance(x0, State5) else np.asarray(x0, dtype=float)


def check_xhh_start(x0, spec, signal, dt: float, t_end: float) -> State5:
    state = x0 if isinstance(x0, State5) else State5.from_array(x0)
    check_input_start(spec, signal, state.zeta, dt, t_end)
    return state


def n_steps_for(t_end: float, dt: float) -> int:
    return max(1, int(round(t_end / dt)))


def advance_batch(x0, spec, signal, dt: float, normals: np.ndarray, monitor: PathMonitor, t0: float = 0.0) -> None:
    """推进一批从 x0 出发的路径，每步状态交给 monitor"""
    n_paths, n_steps = normals.shape
    scheme = InputScheme(spec, signal, dt)
    X = np.repeat(_start(x0)[:, None], n_paths, axis=1)
    aux = scheme.to_aux(X[4]).copy()
    monitor.begin(n_paths, n_steps)
    monitor.observe(0, t0, X)
    for k in range(n_steps):
        t = t0 + k * dt
        v, n, m, h, zeta = X
        aux = scheme.step(aux, t, normals[:, k])
        zeta_next = scheme.report(aux)
        v_next = v + (zeta_next - zeta) - current_F((v, n, m, h)) * dt
        an, bn, am, bm, ah, bh = all_rates(v)
        gates = []
        for x, alpha, beta in ((n, an, bn), (m, am, bm), (h, ah, bh)):
            rate = alpha + beta
            x_inf = alpha / rate
            gates.append(x_inf + (x - x_inf) * np.exp(-rate * dt))
        X = np.stack([v_next, *gates, zeta_next])
        if not np.all((X[1:4] > 0.0) & (X[1:4] < 1.0)):
            raise StateEscape(f"gating left (0, 1) at t = {t + dt:.6g} ms")
        monitor.observe(k + 1, t + dt, X)


def simulate_xhh(x0: State5, spec, signal, t_end: float, dt: float, rng: RngStream, t0: float = 0.0) -> Path5:
    """单条 (ξHH) 路径"""
    x0 = check_xhh_start(x0, spec, signal, dt, t_end)
    n_steps = n_steps_for(t_end, dt)
    recorder = PathRecorder(spec.lower_bound)
    advance_batch(x0, spec, signal, dt, rng.normals(n_steps)[None, :], recorder, t0)
    logger.debug("simulated one (ξHH) path of %d steps from stream %d", n_steps, rng.stream_id)
    return Path5(
        times=t0 + dt * np.arange(n_steps + 1),
        states=recorder.result()[:, :, 0],
        exit_level=recorder.exit_levels()[0],
        seed=rng.seed,
        stream_id=rng.stream_id,
    )
