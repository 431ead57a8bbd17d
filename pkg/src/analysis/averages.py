"""滑动平均 M(s) = ∫₀^∞ S(s - r/τ) e^{-r} dr 与 OU 的平稳分布"""
import math
from typing import Annotated, Literal

import numpy as np
from numpy.polynomial.laguerre import laggauss
from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate

from src.errors import DomainError
from src.model import SignalSpec
from src.stochsys import RngStream

LAGUERRE_NODES = 64


def _periodic_average(signal, s: float, tau: float) -> float:
    # 对 T-周期的 S，把 [0, ∞) 折叠到一个周期上
    span = tau * signal.period
    value, _ = integrate.quad(lambda r: signal(s - r / tau) * math.exp(-r), 0.0, span,
                              epsabs=1e-13, epsrel=1e-12, limit=200)
    return value / -math.expm1(-span)


def _laguerre_average(signal, s: float, tau: float) -> float:
    nodes, weights = laggauss(LAGUERRE_NODES)
    return float(np.dot(weights, signal(s - nodes / tau)))


def moving_average_M(signal, s, tau: float, method: Literal["periodic", "laguerre"] = "periodic"):
    """M(s)；method="laguerre" 为 64 点 Gauss-Laguerre，2π/(τT) ≤ 1 时可靠"""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    average = _periodic_average if method == "periodic" else _laguerre_average
    if np.ndim(s) == 0:
        return average(signal, float(s), tau)
    s = np.asarray(s, dtype=float)
    return np.array([average(signal, x, tau) for x in s.ravel()]).reshape(s.shape)


class OUStationaryLaw(BaseModel):
    """平稳 OU 输入在相位 s 处的分布 N(M(s), γ²/2)"""
    model_config = ConfigDict(frozen=True)

    signal: SignalSpec
    tau: Annotated[float, Field(title="回复速率 τ", gt=0)]
    gamma: Annotated[float, Field(title="扩散强度 γ", ge=0)]

    @property
    def variance(self) -> float:
        return 0.5 * self.gamma**2

    def mean(self, s):
        return moving_average_M(self.signal, s, self.tau)

    def sample(self, s: float, size: int, rng: RngStream) -> np.ndarray:
        return rng.generator().normal(self.mean(s), math.sqrt(self.variance), size)


def ou_stationary(signal, tau: float, gamma: float) -> OUStationaryLaw:
    return OUStationaryLaw(signal=signal, tau=tau, gamma=gamma)
