"""路径监视器：逐批观察 (ξHH) 系综

每一步之后监视器看到形状为 (5, P) 的批状态 X。每个批次使用自己的副本，
`combine` 按批次顺序折叠结果。监视器只持有普通数组，可在进程间 pickle。
"""
import math

import numpy as np

from src.model.states import containment_level


class PathMonitor:
    def begin(self, n_paths: int, n_steps: int) -> None:
        pass

    def observe(self, step: int, t: float, X: np.ndarray) -> None:
        raise NotImplementedError

    def result(self):
        raise NotImplementedError

    def combine(self, parts: list):
        raise NotImplementedError


class FinalState(PathMonitor):
    """终点 X_t，形状 (P, 5)"""

    def __init__(self):
        self.final = None

    def observe(self, step: int, t: float, X: np.ndarray) -> None:
        self.final = X.T.copy()

    def result(self) -> np.ndarray:
        return self.final

    def combine(self, parts: list) -> np.ndarray:
        return np.concatenate(parts, axis=0)


class TubeDistance(PathMonitor):
    """每条路径上网格时刻 |X_s - reference_s| 的 sup"""

    def __init__(self, reference: np.ndarray):
        self.reference = np.asarray(reference, dtype=float)
        self.distance = None

    def begin(self, n_paths: int, n_steps: int) -> None:
        if self.reference.shape != (n_steps + 1, 5):
            raise ValueError(f"reference must have shape ({n_steps + 1}, 5), got {self.reference.shape}")
        self.distance = np.zeros(n_paths)

    def observe(self, step: int, t: float, X: np.ndarray) -> None:
        gap = np.linalg.norm(X - self.reference[step][:, None], axis=0)
        np.maximum(self.distance, gap, out=self.distance)

    def result(self) -> np.ndarray:
        return self.distance

    def combine(self, parts: list) -> np.ndarray:
        return np.concatenate(parts)


class MomentTrace(PathMonitor):
    """v 与 ζ 的一阶、二阶矩之和，每 stride 步记录一次"""

    def __init__(self, stride: int = 1):
        self.stride = stride
        self.sums = None
        self.count = 0

    def begin(self, n_paths: int, n_steps: int) -> None:
        self.sums = np.zeros((4, n_steps // self.stride + 1))
        self.count = n_paths

    def observe(self, step: int, t: float, X: np.ndarray) -> None:
        if step % self.stride:
            return
        column = step // self.stride
        v, zeta = X[0], X[4]
        self.sums[:, column] = (v.sum(), (v * v).sum(), zeta.sum(), (zeta * zeta).sum())

    def result(self) -> tuple[int, np.ndarray]:
        return self.count, self.sums

    def combine(self, parts: list) -> tuple[int, np.ndarray]:
        return sum(count for count, _ in parts), sum(sums for _, sums in parts)


class PathRecorder(PathMonitor):
    """记录完整路径，并给出每条路径所需的紧集层级"""

    def __init__(self, lower_bound: float = -math.inf):
        self.lower_bound = lower_bound
        self.states = None

    def begin(self, n_paths: int, n_steps: int) -> None:
        self.states = np.empty((n_steps + 1, 5, n_paths))

    def observe(self, step: int, t: float, X: np.ndarray) -> None:
        self.states[step] = X

    def result(self) -> np.ndarray:
        return self.states

    def combine(self, parts: list) -> np.ndarray:
        return np.concatenate(parts, axis=2)

    def exit_levels(self) -> list[int | None]:
        levels = containment_level(np.moveaxis(self.states, 1, 0), self.lower_bound).max(axis=0)
        return [int(level) if math.isfinite(level) else None for level in levels]


def moment_summary(count: int, sums: np.ndarray) -> np.ndarray:
    """每个记录时刻一行 (mean_v, var_v, mean_zeta, var_zeta)，方差无偏"""
    mean_v, mean_zeta = sums[0] / count, sums[2] / count
    ddof = count - 1 if count > 1 else 1
    var_v = np.maximum(sums[1] - count * mean_v**2, 0.0) / ddof
    var_zeta = np.maximum(sums[3] - count * mean_zeta**2, 0.0) / ddof
    return np.stack([mean_v, var_v, mean_zeta, var_zeta])
