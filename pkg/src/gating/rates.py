import math
from enum import Enum
from typing import Callable

import numpy as np

from src.errors import JetOrderError
from src.gating.jet import DEFAULT_ORDER, Jet

# x/(e^x - 1) 的 Bernoulli 级数系数，到 x^8
PHI_SERIES = (1.0, -1.0 / 2.0, 1.0 / 12.0, 0.0, -1.0 / 720.0, 0.0, 1.0 / 30240.0, 0.0, -1.0 / 1209600.0)
PHI_SERIES_RADIUS = 0.25


class RateKind(Enum):
    """门控变量种类"""
    N = "n"
    M = "m"
    H = "h"


def _is_scalar(x) -> bool:
    return np.ndim(x) == 0


def _exp(x):
    return math.exp(x) if _is_scalar(x) else np.exp(x)


def _phi_series(x):
    result = PHI_SERIES[-1]
    for coefficient in reversed(PHI_SERIES[:-1]):
        result = result * x + coefficient
    return result


def phi(x):
    """x/(e^x - 1)，在 x=0 处连续延拓为 1"""
    if _is_scalar(x):
        x = float(x)
        if abs(x) < PHI_SERIES_RADIUS:
            return _phi_series(x)
        return x / math.expm1(x)
    x = np.asarray(x, dtype=float)
    near = np.abs(x) < PHI_SERIES_RADIUS
    safe = np.where(near, 1.0, x)
    return np.where(near, _phi_series(x), safe / np.expm1(safe))


def phi_of(x: Jet) -> Jet:
    """phi 与 jet 的复合，分支按每个基点选取"""
    near = np.abs(x.value) < PHI_SERIES_RADIUS
    series = Jet.constant(PHI_SERIES[-1], x)
    for coefficient in reversed(PHI_SERIES[:-1]):
        series = series * x + coefficient
    if np.all(near):
        return series
    safe = Jet(x.base_point, np.where(near, 1.0, x.coeffs))
    direct = safe / safe.expm1()
    return Jet(x.base_point, np.where(near, series.coeffs, direct.coeffs))


def phi_jet(x, order: int = DEFAULT_ORDER) -> Jet:
    return phi_of(Jet.variable(x, order))


# 各速率函数；参数可以是 float、ndarray 或 Jet
def _alpha_n(v):
    return 0.1 * (phi_of(1.0 - 0.1 * v) if isinstance(v, Jet) else phi(1.0 - 0.1 * v))


def _beta_n(v):
    return 0.125 * ((-v / 80.0).exp() if isinstance(v, Jet) else _exp(-v / 80.0))


def _alpha_m(v):
    return phi_of(2.5 - 0.1 * v) if isinstance(v, Jet) else phi(2.5 - 0.1 * v)


def _beta_m(v):
    return 4.0 * ((-v / 18.0).exp() if isinstance(v, Jet) else _exp(-v / 18.0))


def _alpha_h(v):
    return 0.07 * ((-v / 20.0).exp() if isinstance(v, Jet) else _exp(-v / 20.0))


def _beta_h(v):
    if isinstance(v, Jet):
        return 1.0 / ((3.0 - 0.1 * v).exp() + 1.0)
    return 1.0 / (_exp(3.0 - 0.1 * v) + 1.0)


RateFunctions = dict[RateKind, tuple[Callable, Callable]]

RATE_FUNCTIONS: RateFunctions = {
    RateKind.N: (_alpha_n, _beta_n),
    RateKind.M: (_alpha_m, _beta_m),
    RateKind.H: (_alpha_h, _beta_h),
}


def rates(kind: RateKind, v, rate_functions: RateFunctions = RATE_FUNCTIONS):
    """(alpha, beta) at v"""
    alpha, beta = rate_functions[kind]
    return alpha(v), beta(v)


def rates_jet(kind: RateKind, v, order: int = DEFAULT_ORDER, rate_functions: RateFunctions = RATE_FUNCTIONS):
    return rates(kind, Jet.variable(v, order), rate_functions)


def all_rates(v) -> tuple:
    """一次算出 (α_n, β_n, α_m, β_m, α_h, β_h)，供积分器内层循环使用"""
    return _alpha_n(v), _beta_n(v), _alpha_m(v), _beta_m(v), _alpha_h(v), _beta_h(v)


def steady_state(kind: RateKind, v, rate_functions: RateFunctions = RATE_FUNCTIONS):
    alpha, beta = rates(kind, v, rate_functions)
    return alpha / (alpha + beta)


def gating_drift(kind: RateKind, v, x, rate_functions: RateFunctions = RATE_FUNCTIONS):
    """G_x(v, x) = α(v)(1 - x) - β(v)x"""
    alpha, beta = rates(kind, v, rate_functions)
    return alpha * (1.0 - x) - beta * x


def current_F(s):
    """36n⁴(v+12) + 120m³h(v-120) + 0.3(v-10.6)"""
    v, n, m, h = _unpack4(s)
    return 36.0 * n**4 * (v + 12.0) + 120.0 * m**3 * h * (v - 120.0) + 0.3 * (v - 10.6)


def F_infty(v):
    n, m, h = (steady_state(kind, v) for kind in RateKind)
    return current_F((v, n, m, h))


def F_infty_jet(v, order: int = DEFAULT_ORDER) -> Jet:
    return F_infty(Jet.variable(v, order))


def g_value_and_v_derivs(kind: RateKind, v, x, max_order: int, order: int = DEFAULT_ORDER,
                         rate_functions: RateFunctions = RATE_FUNCTIONS) -> np.ndarray:
    """entry k 为 ∂ᵏ_v g = α^(k+1)(1-x) - β^(k+1)x"""
    if max_order > order - 1:
        raise JetOrderError(f"max_order {max_order} needs a jet of order {max_order + 1}, have {order}")
    alpha, beta = rates_jet(kind, v, order, rate_functions)
    derivatives = gating_drift_coefficients(alpha, beta, x).derivatives(max_order + 1)
    return derivatives[1:]


def gating_drift_coefficients(alpha: Jet, beta: Jet, x) -> Jet:
    return alpha * (1.0 - np.asarray(x, dtype=float)) - beta * np.asarray(x, dtype=float)


def _unpack4(s):
    if hasattr(s, "v") and hasattr(s, "n"):
        return s.v, s.n, s.m, s.h
    v, n, m, h = s
    return v, n, m, h
