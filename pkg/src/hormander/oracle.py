"""有限差分 Lie 括号，与闭式递推相互独立

向量场是可调用对象 (t, X) -> 形状 (5, N) 的数组，X 形状为 (5, N)。
方向导数沿求导场的单位方向做中心差分，再外推两次 (h, h/2, h/4)。
每嵌套一层，内层场的舍入噪声都会被步长除一次，所以状态步长保持在 1 的量级。
"""
from typing import Callable

import numpy as np

from src.hormander.brackets import diffusion_field, stratonovich_drift
from src.model import BracketSet, State5

Field = Callable[[float, np.ndarray], np.ndarray]

STATE_STEP = 1.0
TIME_STEP = 0.2


def _richardson(difference: Callable[[float], np.ndarray], h: float) -> np.ndarray:
    d1, d2, d4 = difference(h), difference(h / 2), difference(h / 4)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d4 - d2) / 3.0
    return (16.0 * r2 - r1) / 15.0


def directional_derivative(W: Field, U: Field, t: float, X: np.ndarray, step: float = STATE_STEP) -> np.ndarray:
    """D_U W at (t, X)"""
    u = U(t, X)
    norm = np.linalg.norm(u, axis=0)
    unit = u / np.where(norm > 0, norm, 1.0)

    def difference(h: float) -> np.ndarray:
        return (W(t, X + h * unit) - W(t, X - h * unit)) / (2.0 * h)

    return norm * _richardson(difference, step)


def time_derivative(W: Field, t: float, X: np.ndarray, step: float = TIME_STEP) -> np.ndarray:
    def difference(h: float) -> np.ndarray:
        return (W(t + h, X) - W(t - h, X)) / (2.0 * h)

    return _richardson(difference, step)


def lie_bracket(V: Field, W: Field, step: float = STATE_STEP, with_time: bool = False) -> Field:
    """[V, W] = D_V W - D_W V，with_time 时 V 代表 ∂_t + V"""

    def bracket(t: float, X: np.ndarray) -> np.ndarray:
        value = directional_derivative(W, V, t, X, step) - directional_derivative(V, W, t, X, step)
        if with_time:
            value = value + time_derivative(W, t, X)
        return value

    return bracket


def xhh_fields(spec, signal) -> tuple[Field, Field]:
    """(b̃, σ) 写成批量向量场"""

    def drift(t: float, X: np.ndarray) -> np.ndarray:
        return stratonovich_drift(t, X, spec, signal)

    def sigma(t: float, X: np.ndarray) -> np.ndarray:
        return diffusion_field(X, spec)

    return drift, sigma


def oracle_vectors(t: float, points: np.ndarray, spec, signal, step: float = STATE_STEP) -> list[np.ndarray]:
    """形状 (N, 5) 的点上的 σ, V2..V5，每个返回形状 (N, 5)"""
    X = np.asarray(points, dtype=float).T
    drift, sigma = xhh_fields(spec, signal)
    fields = [sigma, lie_bracket(drift, sigma, step, with_time=True)]
    for _ in range(3):
        fields.append(lie_bracket(sigma, fields[-1], step))
    return [field(t, X).T for field in fields]


def brackets_numeric_oracle(t: float, x: State5, spec, signal, step: float = STATE_STEP) -> BracketSet:
    sigma, V2, V3, V4, V5 = (vector[0] for vector in oracle_vectors(t, x.as_array()[None, :], spec, signal, step))
    # A_k 取第 5 分量，g 部分在该分量上为 0
    A = np.array([V2[4], V3[4], V4[4], V5[4]])
    return BracketSet(t=t, x=x, sigma=sigma, V2=V2, V3=V3, V4=V4, V5=V5, A=A)
