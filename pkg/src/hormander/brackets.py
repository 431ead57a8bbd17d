"""(ξHH) 向量场的闭式括号 σ, V2 = [b̃, σ], V_{k+1} = [σ, V_k]

每个 V_k 都形如 Σ_j c_{k,j}(ζ) P_j + A_k(t, ζ)(e1 + e5)，
P_j = (∂_v^{j+1} F, -g_n^(j), -g_m^(j), -g_h^(j), 0)。
由 [σ, W] = d(∂_v W + ∂_ζ W) - W⁵ d'(e1 + e5)，一步括号给出

    c_{k+1, j+1} += d c_{k, j},   c_{k+1, j} += d ∂_ζ c_{k, j},   A_{k+1} = d ∂_ζ A_k - A_k d'.

ζ 的依赖由 d 的 jet 携带，每一步消耗一阶。
"""
import numpy as np

from src.gating import DEFAULT_ORDER, Jet, RateKind, current_F, gating_drift, g_value_and_v_derivs
from src.model import BracketSet, State5

E1_E5 = np.array([1.0, 0.0, 0.0, 0.0, 1.0])
HIGHEST = 5


def _unpack5(x):
    if isinstance(x, State5):
        return x.v, x.n, x.m, x.h, x.zeta
    v, n, m, h, zeta = x
    return v, n, m, h, zeta


def stratonovich_drift(t, x, spec, signal) -> np.ndarray:
    """b̃：第 1、5 分量减去 ½d'(ζ)d(ζ)"""
    v, n, m, h, zeta = _unpack5(x)
    shift = spec.stratonovich_shift(zeta)
    pull = (signal(t) - zeta) * spec.tau
    return np.array([
        pull - current_F((v, n, m, h)) - shift,
        gating_drift(RateKind.N, v, n),
        gating_drift(RateKind.M, v, m),
        gating_drift(RateKind.H, v, h),
        pull - shift,
    ])


def diffusion_field(x, spec) -> np.ndarray:
    """σ = d(ζ)(e1 + e5)"""
    zeta = _unpack5(x)[4]
    d = spec.d(zeta)
    return np.multiply.outer(E1_E5, d) if np.ndim(d) else E1_E5 * d


def direction_basis(x) -> np.ndarray:
    """P_0..P_3 叠成 (4, 5, *batch)"""
    v, n, m, h, _ = _unpack5(x)
    v = np.asarray(v, dtype=float)
    dF = current_F((Jet.variable(v, HIGHEST), n, m, h)).derivatives(HIGHEST - 1)[1:]
    g = [g_value_and_v_derivs(kind, v, x_, HIGHEST - 2) for kind, x_ in zip(RateKind, (n, m, h))]
    zero = np.zeros(v.shape)
    return np.array([[dF[j], -g[0][j], -g[1][j], -g[2][j], zero] for j in range(HIGHEST - 1)])


def bracket_coefficients(t, zeta, spec, signal, order: int = DEFAULT_ORDER) -> tuple[list[dict[int, Jet]], list[Jet]]:
    """c_{k,j} 与 A_k (k = 2..5) 的 ζ-jet"""
    zeta_jet = Jet.variable(zeta, order)
    d = spec.d_of(zeta_jet)
    d1 = d.derivative()
    d2 = d1.derivative()
    b5 = (signal(t) - zeta_jet) * spec.tau - d1 * d * 0.5
    A = d1 * b5 + d * (spec.tau + (d1 * d1 + d * d2) * 0.5)
    c: dict[int, Jet] = {0: d}
    coefficients, amplitudes = [c], [A]
    for _ in range(HIGHEST - 2):
        step: dict[int, Jet] = {}
        for j, cj in c.items():
            step[j + 1] = step[j + 1] + d * cj if j + 1 in step else d * cj
            step[j] = step[j] + d * cj.derivative() if j in step else d * cj.derivative()
        c = step
        A = d * A.derivative() - A * d.derivative()
        coefficients.append(c)
        amplitudes.append(A)
    return coefficients, amplitudes


def bracket_vectors(t, x, spec, signal) -> tuple[np.ndarray, list[np.ndarray], np.ndarray]:
    """σ、[V2..V5] 与 [A2..A5]；x 的每个坐标可以是形状 (N,) 的数组"""
    zeta = _unpack5(x)[4]
    basis = direction_basis(x)
    coefficients, amplitudes = bracket_coefficients(t, zeta, spec, signal)
    sigma = diffusion_field(x, spec)
    vectors = []
    for c, A in zip(coefficients, amplitudes):
        V = sum(cj.value * basis[j] for j, cj in c.items())
        V = V + np.multiply.outer(E1_E5, A.value) if np.ndim(A.value) else V + E1_E5 * A.value
        vectors.append(V)
    return sigma, vectors, np.array([A.value for A in amplitudes])


def brackets_closed_form(t: float, x: State5, spec, signal) -> BracketSet:
    sigma, (V2, V3, V4, V5), A = bracket_vectors(t, x, spec, signal)
    return BracketSet(t=t, x=x, sigma=sigma, V2=V2, V3=V3, V4=V4, V5=V5, A=A)


def bracket_matrices(t, points: np.ndarray, spec, signal) -> np.ndarray:
    """形状 (N, 5) 的点上批量计算 [σ V2 V3 V4 V5]，返回 (N, 5, 5)"""
    x = tuple(np.asarray(points, dtype=float).T)
    sigma, vectors, _ = bracket_vectors(t, x, spec, signal)
    columns = np.stack([sigma, *vectors])  # (5 columns, 5 rows, N)
    return np.moveaxis(columns, (0, 1), (-1, -2))
