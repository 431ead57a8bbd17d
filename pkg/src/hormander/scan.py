import logging

import numpy as np
from scipy import optimize

from src.errors import ConfigError, DomainError
from src.hormander.determinant import determinant_D, equilibrium_D
from src.model import OrbitScan, OrbitSummary

logger = logging.getLogger(__name__)

SEGMENT_LEVELS = (-2.0, 5.0)


def equilibrium_curve(v_lo: float, v_hi: float, grid_n: int) -> tuple[np.ndarray, np.ndarray]:
    """平衡曲线上的网格 (v, D)"""
    if not v_lo < v_hi:
        raise ConfigError(f"scan range must satisfy v_lo < v_hi, got ({v_lo}, {v_hi})")
    if grid_n < 100:
        raise ConfigError(f"grid_n must be at least 100, got {grid_n}")
    v = np.linspace(v_lo, v_hi, grid_n + 1)
    return v, equilibrium_D(v)


def scan_equilibrium_curve(v_lo: float, v_hi: float, grid_n: int) -> list[float]:
    """[v_lo, v_hi] 上 v ↦ D(v, n∞, m∞, h∞) 的零点，升序"""
    v, D = equilibrium_curve(v_lo, v_hi, grid_n)
    zeros = [float(x) for x in v[D == 0.0]]
    for i in np.nonzero(D[:-1] * D[1:] < 0)[0]:
        root = optimize.brentq(equilibrium_D, v[i], v[i + 1], xtol=1e-12, rtol=4 * np.finfo(float).eps)
        logger.debug("D changes sign in [%.6g, %.6g], zero at %.10g", v[i], v[i + 1], root)
        zeros.append(float(root))
    return sorted(zeros)


def _cyclic_upcrossing(v: np.ndarray, level: float, start: int = 0) -> int:
    """从 start 起（循环）第一个满足 v[i] < level <= v[i+1] 的下标"""
    n = v.shape[0]
    order = (start + np.arange(n)) % n
    hits = np.nonzero((v[order] < level) & (np.roll(v, -1)[order] >= level))[0]
    if hits.size == 0:
        raise DomainError(f"the orbit never upcrosses v = {level}")
    return int(order[hits[0]])


def _sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def scan_orbit(orbit: OrbitSummary, levels: tuple[float, float] = SEGMENT_LEVELS) -> OrbitScan:
    """沿稳定轨道计算 D；段为 v 上穿 levels[0] 到上穿 levels[1] 之间（循环意义下）"""
    if not orbit.converged:
        logger.warning("scanning an orbit whose last loops differ by %.3e", orbit.superposition_error)
    samples = orbit.orbit_samples
    v = samples.v
    D = determinant_D(tuple(samples.states.T))
    n = v.shape[0]

    first = _cyclic_upcrossing(v, levels[0])
    last = _cyclic_upcrossing(v, levels[1], start=first + 1)
    length = (last - first) % n
    inside = (first + 1 + np.arange(length)) % n
    segment = np.zeros(n)
    segment[inside] = 1.0

    outside = (last + 1 + np.arange(n - length)) % n
    changes = _sign_changes(D[outside])
    logger.debug("orbit segment holds %d of %d samples, %d sign changes outside", length, n, changes)
    return OrbitScan(times=samples.times, v=v, D=D, segment=segment, sign_changes=changes)
