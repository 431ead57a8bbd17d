"""门控斜率 g_x = ∂_v G_x 的 v 导数构成的行列式 D

D(v, n, m, h) = det[[g'_n, g''_n, g'''_n], [g'_m, g''_m, g'''_m], [g'_h, g''_h, g'''_h]]。
每行对自己的门控变量是线性的，所以固定 v 时 D 对 (n, m, h) 多重线性。
"""
import numpy as np

from src.gating import RATE_FUNCTIONS, RateKind, g_value_and_v_derivs, steady_state
from src.gating.rates import RateFunctions, _unpack4


def derivative_matrix(s, rate_functions: RateFunctions = RATE_FUNCTIONS) -> np.ndarray:
    """行为 (g', g'', g''')，形状 (..., 3, 3)"""
    v, n, m, h = _unpack4(s)
    gates = {RateKind.N: n, RateKind.M: m, RateKind.H: h}
    rows = [
        g_value_and_v_derivs(kind, v, gates[kind], 3, rate_functions=rate_functions)[1:]
        for kind in RateKind
    ]
    # (3 rows, 3 derivatives, *batch) -> (*batch, 3, 3)
    matrix = np.stack(rows)
    return np.moveaxis(matrix, (0, 1), (-2, -1))


def determinant_D(s, rate_functions: RateFunctions = RATE_FUNCTIONS):
    """State4、4 元组或同形数组 4 元组处的 D"""
    value = np.linalg.det(derivative_matrix(s, rate_functions))
    return float(value) if np.ndim(value) == 0 else value


def normalized_D(s, rate_functions: RateFunctions = RATE_FUNCTIONS):
    """D 除以各行范数之积，取值在 [-1, 1]"""
    matrix = derivative_matrix(s, rate_functions)
    scale = np.prod(np.linalg.norm(matrix, axis=-1), axis=-1)
    value = np.linalg.det(matrix) / np.where(scale > 0, scale, 1.0)
    return float(value) if np.ndim(value) == 0 else value


def equilibrium_D(v):
    """v ↦ D(v, n∞(v), m∞(v), h∞(v))"""
    v = np.asarray(v, dtype=float)
    gates = [steady_state(kind, v) for kind in RateKind]
    return determinant_D((v, *gates))
