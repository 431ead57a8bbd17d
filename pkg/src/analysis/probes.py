"""Monte-Carlo 正性探测：管道与球命中，以及某点处的核密度估计

结果只佐证严格正性；核估计是可达点处的探测，不是已证明存在的密度的估计。
"""
import logging
import math

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from src.detsys import detect_orbit, find_equilibrium, integrate_det
from src.errors import ConfigError, DomainError, EmptyEnsemble
from src.hormander import DEFAULT_TOL_D, normalized_D
from src.model import (
    BallTarget,
    ConstantSignal,
    ControlProblem,
    KdeEstimate,
    OrbitSummary,
    State4,
    State5,
    TubeResult,
)
from src.stochsys import FinalState, RngStream, TubeDistance, run_ensemble

logger = logging.getLogger(__name__)


def wilson_interval(hits: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """二项比例的 Wilson 区间"""
    if trials < 1 or not 0 <= hits <= trials:
        raise DomainError(f"need 0 <= hits <= trials and trials >= 1, got {hits}/{trials}")
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    p = hits / trials
    denominator = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denominator
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denominator
    return max(0.0, center - half), min(1.0, center + half)


def _result(hits: int, trials: int, epsilon: float) -> TubeResult:
    return TubeResult(hits=hits, trials=trials, epsilon=epsilon, wilson_ci=wilson_interval(hits, trials))


def tube_reference(problem: ControlProblem, dt: float) -> np.ndarray:
    """从起点出发、S̃ 驱动的 (HH)，第五个坐标为 Ĩ，步长 dt 的网格"""
    trajectory = integrate_det(problem.start.projection(), problem.target_signal, problem.horizon, dt)
    level = problem.integrator(trajectory.times)
    return np.column_stack([trajectory.states, level])


def tube_distances(problem: ControlProblem, trials: int, dt: float, rng: RngStream,
                   workers: int | None = None) -> np.ndarray:
    reference = tube_reference(problem, dt)
    return run_ensemble(problem.start, problem.spec, problem.driving_signal, problem.horizon, dt, rng.seed,
                        trials, TubeDistance(reference), workers=workers)


def tube_sweep(problem: ControlProblem, epsilons, trials: int, dt: float, rng: RngStream,
               workers: int | None = None) -> list[TubeResult]:
    """同一组路径上不同 ε 的管道命中数"""
    epsilons = [float(e) for e in epsilons]
    if any(e <= 0 for e in epsilons):
        raise DomainError("tube radii must be positive")
    distances = tube_distances(problem, trials, dt, rng, workers)
    results = [_result(int(np.count_nonzero(distances <= e)), trials, e) for e in epsilons]
    for result in results:
        logger.info("tube ε=%g: %d/%d hits", result.epsilon, result.hits, result.trials)
    return results


def tube_probability(problem: ControlProblem, epsilon: float, trials: int, dt: float, rng: RngStream,
                     workers: int | None = None) -> TubeResult:
    return tube_sweep(problem, [epsilon], trials, dt, rng, workers)[0]


def endpoint_samples(x0: State5, t: float, spec, signal, trials: int, dt: float, rng: RngStream,
                     workers: int | None = None) -> np.ndarray:
    """从 x0 出发的 trials 条路径的 X_t，形状 (trials, 5)"""
    return run_ensemble(x0, spec, signal, t, dt, rng.seed, trials, FinalState(), workers=workers)


def ball_hit_probability(x0: State5, x1: State5, epsilon: float, t: float, spec, signal, trials: int, dt: float,
                         rng: RngStream, workers: int | None = None) -> TubeResult:
    """P(|X_t - x1| < ε) 的估计"""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    endpoints = endpoint_samples(x0, t, spec, signal, trials, dt, rng, workers)
    hits = int(np.count_nonzero(np.linalg.norm(endpoints - x1.as_array(), axis=1) < epsilon))
    logger.info("ball hit ε=%g at t=%g: %d/%d", epsilon, t, hits, trials)
    return _result(hits, trials, epsilon)


def scott_bandwidth(samples: np.ndarray) -> np.ndarray:
    n, dim = samples.shape
    spread = samples.std(axis=0, ddof=1) if n > 1 else np.ones(dim)
    return spread * n ** (-1.0 / (dim + 4))


def _log_kde(samples: np.ndarray, center: np.ndarray, bandwidth: np.ndarray) -> float:
    scaled = (samples - center) / bandwidth
    log_kernel = -0.5 * np.sum(scaled * scaled, axis=1)
    norm = np.sum(np.log(bandwidth)) + 0.5 * samples.shape[1] * math.log(2.0 * math.pi)
    return float(logsumexp(log_kernel) - math.log(samples.shape[0]) - norm)


def kde_positivity_probe(samples: np.ndarray, center: State5, bandwidth=None, bootstrap: int = 0,
                         rng: RngStream | None = None, tol_D: float = DEFAULT_TOL_D) -> KdeEstimate:
    """乘积高斯核在 center 处的密度估计；bootstrap > 0 时给出标准误"""
    samples = np.asarray(samples, dtype=float).reshape(-1, 5)
    if samples.shape[0] == 0:
        raise EmptyEnsemble("no endpoint samples to estimate a density from")
    if not abs(normalized_D(center.projection())) > tol_D:
        raise DomainError("the center does not lie where D is non-zero")
    bandwidth = scott_bandwidth(samples) if bandwidth is None else np.broadcast_to(np.asarray(bandwidth, float), (5,))
    if not np.all(bandwidth > 0):
        raise DomainError("every bandwidth must be positive")
    point = center.as_array()
    log_density = _log_kde(samples, point, bandwidth)

    stderr = None
    if bootstrap > 0:
        generator = (rng or RngStream(seed=0)).generator()
        n = samples.shape[0]
        replicas = [
            math.exp(_log_kde(samples[generator.integers(0, n, n)], point, bandwidth)) for _ in range(bootstrap)
        ]
        stderr = float(np.std(replicas, ddof=1)) if bootstrap > 1 else 0.0
    return KdeEstimate(
        density=math.exp(log_density),
        log_density=log_density,
        stderr=stderr,
        n_samples=samples.shape[0],
        bandwidth=bandwidth,
    )


def orbit_anchor(orbit: OrbitSummary, target_signal, zeta: float,
                 tol_D: float = DEFAULT_TOL_D) -> tuple[State5, State5]:
    """轨道截面点 x* = (0, n*, m*, h*, ζ) 与一周期后的 z* = (0, n*, m*, h*, ζ + ∫₀ᵀ S̃)，T 为轨道周期"""
    samples = orbit.orbit_samples
    crossing = orbit.section_crossings[-2]
    gates = [float(np.interp(crossing, samples.times, samples.states[:, k])) for k in (1, 2, 3)]
    anchor = State4(v=0.0, n=gates[0], m=gates[1], h=gates[2])
    if not abs(normalized_D(anchor)) > tol_D:
        raise DomainError("the orbit section point lies where D vanishes")
    x_star = State5.extend(anchor, zeta)
    z_star = State5.extend(anchor, zeta + float(target_signal.integral(0.0, orbit.period)))
    return x_star, z_star


def corollary_target(c: float, zeta: float, t: float, signal=None) -> BallTarget:
    """静息点 x0 = (eq(c), ζ) 与 x1 = (eq(c), ζ + c·t)；未给信号时以常数 c 驱动"""
    rest = find_equilibrium(c)
    return BallTarget(
        start=State5.extend(rest, zeta),
        target=State5.extend(rest, zeta + c * t),
        t=t,
        signal=signal if signal is not None else ConstantSignal(c=c),
    )


def orbit_target(orbit: OrbitSummary, c: float, zeta: float, t: float | None = None, signal=None) -> BallTarget:
    """轨道截面点 x* 到 z*，默认时刻为一个轨道周期，默认以常数 c 驱动"""
    x_star, z_star = orbit_anchor(orbit, ConstantSignal(c=c), zeta)
    return BallTarget(
        start=x_star,
        target=z_star,
        t=orbit.period if t is None else t,
        signal=signal if signal is not None else ConstantSignal(c=c),
    )


def ballhit_preset(preset: str, c: float | None = None, zeta: float = 0.0, t: float | None = None,
                   signal=None) -> BallTarget:
    if preset == "corollary":
        return corollary_target(1.0 if c is None else c, zeta, 1.0 if t is None else t, signal)
    if preset == "orbit":
        c = 15.0 if c is None else c
        return orbit_target(detect_orbit(ConstantSignal(c=c)), c, zeta, t, signal)
    raise ConfigError(f"unknown ball-hit preset {preset!r}")
