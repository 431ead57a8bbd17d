from enum import Enum
from typing import Annotated

from typing_extensions import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.model.diffusion import InputDiffusionSpec
from src.model.signal import SignalSpec
from src.model.states import State5, Trajectory4
from src.types import PydanticNDArray


class OrbitSummary(BaseModel):
    """稳定周期轨道"""
    model_config = ConfigDict(frozen=True)

    period: Annotated[float, Field(title="周期 (ms)", gt=0)]
    section_crossings: Annotated[list[float], Field(title="截面上穿时刻")]
    orbit_samples: Annotated[Trajectory4, Field(title="最后一圈的采样")]
    converged: Annotated[bool, Field(title="最后两圈是否重合")]
    superposition_error: Annotated[float, Field(title="最后两圈的 sup 距离", ge=0)]


class OrbitScan(BaseModel):
    """轨道上的行列式 D"""
    model_config = ConfigDict(frozen=True)

    times: Annotated[PydanticNDArray, Field(title="时间")]
    v: Annotated[PydanticNDArray, Field(title="膜电位")]
    D: Annotated[PydanticNDArray, Field(title="行列式 D")]
    segment: Annotated[PydanticNDArray, Field(title="-2 上穿到 +5 上穿之间的样本掩码")]
    sign_changes: Annotated[int, Field(title="段外的变号次数", ge=0)]


class ResponseRegime(Enum):
    """周期信号下的确定性响应类型"""
    SUBTHRESHOLD = "subthreshold"
    PHASE_LOCKED = "phase_locked"
    MULTI_PERIODIC = "multi_periodic"
    IRREGULAR = "irregular"


class ResponseSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    regime: Annotated[ResponseRegime, Field(title="响应类型")]
    lock_multiple: Annotated[int | None, Field(title="锁相倍数 k")] = None
    spikes_per_period: Annotated[float, Field(title="每周期平均放电数", ge=0)]
    stroboscopic_spread: Annotated[float, Field(title="频闪采样的最小回归距离", ge=0)]


class BracketSet(BaseModel):
    """σ, V2..V5 以及系数 A2..A5"""
    model_config = ConfigDict(frozen=True)

    t: Annotated[float, Field(title="时间 (ms)")]
    x: Annotated[State5, Field(title="状态")]
    sigma: PydanticNDArray
    V2: PydanticNDArray
    V3: PydanticNDArray
    V4: PydanticNDArray
    V5: PydanticNDArray
    A: Annotated[PydanticNDArray, Field(title="A2..A5")]

    def matrix(self) -> np.ndarray:
        """以 σ, V2, V3, V4, V5 为列的 5×5 矩阵"""
        return np.column_stack([self.sigma, self.V2, self.V3, self.V4, self.V5])

    def vectors(self) -> dict[str, np.ndarray]:
        return {"sigma": self.sigma, "V2": self.V2, "V3": self.V3, "V4": self.V4, "V5": self.V5}


class HormanderReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    D_value: Annotated[float, Field(title="行列式 D")]
    D_normalized: Annotated[float, Field(title="按行范数归一化的 D")]
    min_singular_value: Annotated[float, Field(title="归一化括号矩阵的最小奇异值", ge=0)]
    V_L_gram: Annotated[float, Field(title="Gram 矩阵最小特征值", ge=0)]
    in_O: Annotated[bool, Field(title="|D| > tol")]


class TubeResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    hits: Annotated[int, Field(title="命中次数", ge=0)]
    trials: Annotated[int, Field(title="试验次数", ge=1)]
    epsilon: Annotated[float, Field(title="半径", gt=0)]
    wilson_ci: Annotated[tuple[float, float], Field(title="Wilson 95% 区间")]

    @model_validator(mode="after")
    def _check(self) -> Self:
        if self.hits > self.trials:
            raise ValueError("hits cannot exceed trials")
        lo, hi = self.wilson_ci
        if not 0.0 <= lo <= hi <= 1.0:
            raise ValueError("interval must lie in [0, 1]")
        return self

    @property
    def fraction(self) -> float:
        return self.hits / self.trials


class BallTarget(BaseModel):
    """球命中试验的起点、目标点、时刻与驱动信号"""
    model_config = ConfigDict(frozen=True)

    start: Annotated[State5, Field(title="起点 x0")]
    target: Annotated[State5, Field(title="目标点 x1")]
    t: Annotated[float, Field(title="时刻 (ms)", gt=0)]
    signal: Annotated[SignalSpec, Field(title="驱动信号")]


class ControlProblem(BaseModel):
    """支撑定理的控制问题"""
    model_config = ConfigDict(frozen=True)

    start: Annotated[State5, Field(title="初始状态")]
    driving_signal: Annotated[SignalSpec, Field(title="驱动信号 S")]
    target_signal: Annotated[SignalSpec, Field(title="目标信号 S̃")]
    spec: Annotated[InputDiffusionSpec, Field(title="输入扩散")]
    horizon: Annotated[float, Field(title="时间范围 (ms)", gt=0)]

    @model_validator(mode="after")
    def _integrator_stays_in_U(self) -> Self:
        s = np.linspace(0.0, self.horizon, 2001)
        if not self.spec.contains(self.integrator(s)):
            raise ValueError("ζ0 + ∫S̃ leaves the state interval of the input diffusion")
        return self

    def integrator(self, s):
        """Ĩ_s = ζ0 + ∫₀ˢ S̃(u) du"""
        return self.start.zeta + self.target_signal.integral(0.0, s)


class ControlledTrajectory(BaseModel):
    model_config = ConfigDict(frozen=True)

    times: PydanticNDArray
    states: Annotated[PydanticNDArray, Field(title="(N, 5) 受控轨迹")]


class KdeEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    density: Annotated[float, Field(title="中心处的密度估计", ge=0)]
    log_density: Annotated[float, Field(title="对数密度")]
    stderr: Annotated[float | None, Field(title="bootstrap 标准误")] = None
    n_samples: Annotated[int, Field(title="样本数", ge=1)]
    bandwidth: PydanticNDArray
