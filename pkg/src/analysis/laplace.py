"""CIR 输入 ξ̃ = ξ + K 的 Laplace 变换

dξ̃ = (S̃ - ξ̃)τ dt + γ√τ √ξ̃ dW，S̃ = S + K，变换为仿射形式：

    E[exp(-λ ξ̃_t) | ξ̃_s = x̃] = exp(-x̃ ψ(s) - φ(s)),
    ψ' = τψ + ½γ²τψ²,  φ' = -τ S̃ ψ,  ψ(t) = λ, φ(t) = 0,

沿时间反向积分，解为
ψ_{v,t}(λ) = λ e^{-τ(t-v)} / (1 + λγ²/2 (1 - e^{-τ(t-v)}))。
`printed` 版本分子以 τ 代替 λ，仅作对照，λ = 0 时不等于 1。
"""
import logging
import math

import numpy as np
from scipy import integrate

from src.config import config
from src.errors import DomainError, EmptyEnsemble
from src.model import CIRInput
from src.stochsys import grid_chain_ensemble, simulate_input_ensemble

logger = logging.getLogger(__name__)


def _check(spec, lam: float, s: float | None = None, t: float | None = None) -> None:
    if not isinstance(spec, CIRInput):
        raise DomainError("Laplace transforms are defined for the CIR input only")
    if lam < 0:
        raise DomainError(f"lambda must be non-negative, got {lam}")
    if s is not None and not s < t:
        raise DomainError(f"need s < t, got s={s}, t={t}")


def printed_kernel(s, t, lam: float, spec: CIRInput):
    decay = np.exp(-spec.tau * (t - s))
    return spec.tau * decay / (1.0 + lam * spec.gamma**2 / 2.0 * (1.0 - decay))


def riccati_kernel(s, t, lam: float, spec: CIRInput):
    """ψ_{s,t}(λ) 的闭式解"""
    decay = np.exp(-spec.tau * (t - s))
    return lam * decay / (1.0 + lam * spec.gamma**2 / 2.0 * (1.0 - decay))


def cir_laplace_printed(s: float, t: float, lam: float, signal, spec: CIRInput, zeta_s: float) -> float:
    _check(spec, lam, s, t)
    x_tilde = zeta_s + spec.K
    drift, _ = integrate.quad(lambda v: (signal(v) + spec.K) * printed_kernel(v, t, lam, spec) * spec.tau,
                              s, t, epsabs=1e-13, epsrel=1e-12, limit=200)
    return math.exp(-x_tilde * printed_kernel(s, t, lam, spec) - drift)


def cir_laplace_riccati(s: float, t: float, lam: float, signal, spec: CIRInput, zeta_s: float) -> float:
    """从 t 反向积分 Riccati 方程到 s"""
    _check(spec, lam, s, t)
    tau, gamma, K = spec.tau, spec.gamma, spec.K

    def rhs(v, y):
        psi = y[0]
        return [tau * psi + 0.5 * gamma**2 * tau * psi**2, -tau * (signal(v) + K) * psi]

    solution = integrate.solve_ivp(rhs, (t, s), [lam, 0.0], method="DOP853", rtol=1e-12, atol=1e-14)
    if not solution.success:
        raise DomainError(f"Riccati integration failed: {solution.message}")
    psi, phi = solution.y[:, -1]
    return math.exp(-(zeta_s + K) * psi - phi)


def cir_laplace_mc(s: float, t: float, lams, signal, spec: CIRInput, zeta_s: float, trials: int,
                   dt: float, seed: int, batch_size: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """E[e^{-λ ξ̃_t}] 的 Monte-Carlo 估计及标准误，所有 λ 共用一组路径，按批推进"""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    for lam in lams:
        _check(spec, float(lam), s, t)
    if trials < 1:
        raise EmptyEnsemble("the Monte-Carlo Laplace transform needs at least one path")
    batch_size = batch_size or config.batch_size
    total = np.zeros_like(lams)
    total_sq = np.zeros_like(lams)
    for first in range(0, trials, batch_size):
        count = min(batch_size, trials - first)
        _, values = simulate_input_ensemble(spec, signal, zeta_s, t - s, dt, seed, count, t0=s,
                                            record_every=max(1, int(round((t - s) / dt))), first_stream=first)
        samples = np.exp(-np.outer(lams, values[:, -1] + spec.K))
        total += samples.sum(axis=1)
        total_sq += (samples * samples).sum(axis=1)
    mean = total / trials
    if trials > 1:
        variance = np.maximum(total_sq - trials * mean * mean, 0.0) / (trials - 1)
        stderr = np.sqrt(variance / trials)
    else:
        stderr = np.zeros_like(mean)
    logger.info("Monte-Carlo Laplace transform over %d paths at %d lambda values", trials, lams.size)
    return mean, stderr


def cir_stationary_laplace(s: float, lam: float, signal, spec: CIRInput) -> float:
    """相位 s + kT 处 ξ̃ 不变分布的变换"""
    _check(spec, lam)

    def integrand(r: float) -> float:
        v = s - r
        return (signal(v) + spec.K) * float(riccati_kernel(v, s, lam, spec)) * spec.tau

    exponent, _ = integrate.quad(integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400)
    return math.exp(-exponent)


def cir_stationary_laplace_mc(s: float, lams, signal, spec: CIRInput, zeta0: float, burn_in: int, trials: int,
                              dt: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """燃烧期后的网格链平移到相位 s，再取经验变换"""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    chain = grid_chain_ensemble(spec, signal, zeta0, burn_in, seed, trials, dt)
    start = chain[:, -1]
    if s > 0:
        _, values = simulate_input_ensemble(spec, signal, start, s, dt, seed, trials,
                                            t0=burn_in * signal.period, first_stream=trials)
        start = values[:, -1]
    samples = np.exp(-np.outer(lams, start + spec.K))
    return samples.mean(axis=1), samples.std(axis=1, ddof=1) / math.sqrt(trials)


def laplace_comparison(s: float, t: float, lams, signal, spec: CIRInput, zeta_s: float, trials: int, dt: float,
                       seed: int) -> list[tuple[float, float, float, float, float]]:
    """每个 λ 一行：(λ, printed, riccati, mc, mc 标准误)"""
    mc, stderr = cir_laplace_mc(s, t, lams, signal, spec, zeta_s, trials, dt, seed)
    return [
        (float(lam), cir_laplace_printed(s, t, float(lam), signal, spec, zeta_s),
         cir_laplace_riccati(s, t, float(lam), signal, spec, zeta_s), float(m), float(e))
        for lam, m, e in zip(lams, mc, stderr)
    ]
