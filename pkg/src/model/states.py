import math
from typing import Annotated

from typing_extensions import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.model.signal import SignalSpec
from src.types import PydanticNDArray

OpenUnit = Annotated[float, Field(gt=0.0, lt=1.0)]


class State4(BaseModel):
    """E4 中的点 (v, n, m, h)"""
    model_config = ConfigDict(frozen=True)

    v: Annotated[float, Field(title="膜电位 (mV)", allow_inf_nan=False)]
    n: Annotated[OpenUnit, Field(title="钾激活门")]
    m: Annotated[OpenUnit, Field(title="钠激活门")]
    h: Annotated[OpenUnit, Field(title="钠失活门")]

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.n, self.m, self.h])

    @classmethod
    def from_array(cls, values) -> Self:
        v, n, m, h = (float(x) for x in values)
        return cls(v=v, n=n, m=m, h=h)


class State5(BaseModel):
    """E5 中的点 (v, n, m, h, zeta)"""
    model_config = ConfigDict(frozen=True)

    v: Annotated[float, Field(title="膜电位 (mV)", allow_inf_nan=False)]
    n: Annotated[OpenUnit, Field(title="钾激活门")]
    m: Annotated[OpenUnit, Field(title="钠激活门")]
    h: Annotated[OpenUnit, Field(title="钠失活门")]
    zeta: Annotated[float, Field(title="输入扩散状态", allow_inf_nan=False)]

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.n, self.m, self.h, self.zeta])

    def projection(self) -> State4:
        return State4(v=self.v, n=self.n, m=self.m, h=self.h)

    @classmethod
    def from_array(cls, values) -> Self:
        v, n, m, h, zeta = (float(x) for x in values)
        return cls(v=v, n=n, m=m, h=h, zeta=zeta)

    @classmethod
    def extend(cls, state: State4, zeta: float) -> Self:
        return cls(v=state.v, n=state.n, m=state.m, h=state.h, zeta=zeta)


def _check_grid(times: np.ndarray, states: np.ndarray, width: int) -> None:
    if states.ndim != 2 or states.shape[1] != width:
        raise ValueError(f"states must have shape (N, {width})")
    if times.ndim != 1 or times.shape[0] != states.shape[0]:
        raise ValueError("times and states must have equal lengths")
    if times.shape[0] > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly increasing")
    gates = states[:, 1:4]
    if not np.all((gates > 0.0) & (gates < 1.0)):
        raise ValueError("gating values must stay in (0, 1)")


class Trajectory4(BaseModel):
    """确定性 (HH) 轨迹"""
    model_config = ConfigDict(frozen=True)

    times: Annotated[PydanticNDArray, Field(title="时间网格 (ms)")]
    states: Annotated[PydanticNDArray, Field(title="状态序列 (N, 4)")]
    signal: Annotated[SignalSpec, Field(title="输入信号")]
    step: Annotated[float, Field(title="步长 (ms)", gt=0)]

    @model_validator(mode="after")
    def _check(self) -> Self:
        _check_grid(self.times, self.states, 4)
        return self

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def v(self) -> np.ndarray:
        return self.states[:, 0]

    def state_at(self, index: int) -> State4:
        return State4.from_array(self.states[index])


class Path5(BaseModel):
    """随机 (ξHH) 样本路径及其随机数来源"""
    model_config = ConfigDict(frozen=True)

    times: Annotated[PydanticNDArray, Field(title="时间网格 (ms)")]
    states: Annotated[PydanticNDArray, Field(title="状态序列 (N, 5)")]
    exit_level: Annotated[int | None, Field(title="所需紧集层级 n")] = None
    seed: Annotated[int, Field(title="随机种子", ge=0)]
    stream_id: Annotated[int, Field(title="随机流编号", ge=0)]

    @model_validator(mode="after")
    def _check(self) -> Self:
        _check_grid(self.times, self.states, 5)
        return self

    def __len__(self) -> int:
        return self.times.shape[0]


def containment_level(states: np.ndarray, lower_bound: float) -> np.ndarray:
    """每个状态都在 K_n = [-n,n] x [1/n,1-1/n]^3 x C_n 中的最小 n

    states 形状为 (5, ...)。lower_bound 为 -inf 时 C_n = [-n, n]，
    否则为 [lower_bound + 1/n, n]。没有可行 n 时返回 inf。
    """
    v, gates, zeta = states[0], states[1:4], states[4]
    with np.errstate(divide="ignore"):
        level = np.maximum(np.ceil(np.abs(v)), 2.0)
        margin = np.minimum(gates, 1.0 - gates).min(axis=0)
        level = np.maximum(level, np.where(margin > 0, np.ceil(1.0 / np.where(margin > 0, margin, 1.0)), np.inf))
        if math.isinf(lower_bound):
            level = np.maximum(level, np.ceil(np.abs(zeta)))
        else:
            room = zeta - lower_bound
            level = np.maximum(level, np.ceil(np.maximum(zeta, 0.0)))
            level = np.maximum(level, np.where(room > 0, np.ceil(1.0 / np.where(room > 0, room, 1.0)), np.inf))
    return level
