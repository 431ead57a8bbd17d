"""T 周期输入信号 S(t)"""
import math
from typing import Annotated, Literal, Union

from typing_extensions import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator
from scipy.interpolate import CubicSpline

from src.types import PydanticNDArray


class _PeriodicSignal(BaseModel):
    model_config = ConfigDict(frozen=True)

    def __call__(self, t):
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    def integral(self, t0, t1):
        """∫_{t0}^{t1} S(u) du"""
        raise NotImplementedError

    def sup_abs(self) -> float:
        raise NotImplementedError

    def relaxation_integral(self, t: float, dt: float, tau: float) -> float:
        """∫_t^{t+dt} τ S(u) e^{-τ(t+dt-u)} du，步内用 Simpson"""
        return dt / 6.0 * tau * (
            self(t) * math.exp(-tau * dt) + 4.0 * self(t + 0.5 * dt) * math.exp(-0.5 * tau * dt) + self(t + dt)
        )


class ConstantSignal(_PeriodicSignal):
    """常数信号 S ≡ c"""
    kind: Literal["constant"] = "constant"
    c: Annotated[float, Field(title="常数值", allow_inf_nan=False)]
    period: Annotated[float, Field(title="周期 (ms)", gt=0)] = 1.0

    def __call__(self, t):
        if np.ndim(t) == 0:
            return self.c
        return np.full(np.shape(t), self.c)

    def mean(self) -> float:
        return self.c

    def integral(self, t0, t1):
        span = np.subtract(t1, t0, dtype=float)
        return self.c * float(span) if np.ndim(span) == 0 else self.c * span

    def sup_abs(self) -> float:
        return abs(self.c)

    def relaxation_integral(self, t: float, dt: float, tau: float) -> float:
        return -self.c * math.expm1(-tau * dt)


class SinusoidSignal(_PeriodicSignal):
    """正弦信号 S(t) = a(1 + sin(2πt/T))"""
    kind: Literal["sinusoid"] = "sinusoid"
    a: Annotated[float, Field(title="幅值", allow_inf_nan=False)]
    period: Annotated[float, Field(title="周期 (ms)", gt=0)]

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / self.period

    def __call__(self, t):
        if np.ndim(t) == 0:
            return self.a * (1.0 + math.sin(self.omega * t))
        return self.a * (1.0 + np.sin(self.omega * np.asarray(t, dtype=float)))

    def mean(self) -> float:
        return self.a

    def integral(self, t0, t1):
        w = self.omega
        return self.a * ((t1 - t0) - (np.cos(w * t1) - np.cos(w * t0)) / w)

    def sup_abs(self) -> float:
        return 2.0 * abs(self.a)

    def relaxation_integral(self, t: float, dt: float, tau: float) -> float:
        w = self.omega
        t1 = t + dt
        decay = math.exp(-tau * dt)
        wave = (tau * math.sin(w * t1) - w * math.cos(w * t1)) - decay * (tau * math.sin(w * t) - w * math.cos(w * t))
        return -self.a * math.expm1(-tau * dt) + self.a * tau * wave / (tau * tau + w * w)


class TableSignal(_PeriodicSignal):
    """表格信号，周期三次样条插值"""
    kind: Literal["table"] = "table"
    period: Annotated[float, Field(title="周期 (ms)", gt=0)]
    grid: Annotated[PydanticNDArray, Field(title="采样时间，位于 [0, T)")]
    values: Annotated[PydanticNDArray, Field(title="采样值")]

    _spline: CubicSpline = PrivateAttr()

    @model_validator(mode="after")
    def _build_spline(self) -> Self:
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise ValueError("grid and values must be one-dimensional and of equal length")
        if self.grid.shape[0] < 3:
            raise ValueError("a table signal needs at least three samples")
        if self.grid[0] != 0.0 or self.grid[-1] >= self.period or not np.all(np.diff(self.grid) > 0):
            raise ValueError("grid must start at 0, increase strictly and stay below the period")
        knots = np.append(self.grid, self.period)
        samples = np.append(self.values, self.values[0])
        self._spline = CubicSpline(knots, samples, bc_type="periodic", extrapolate="periodic")
        return self

    def __call__(self, t):
        value = self._spline(t)
        return float(value) if np.ndim(t) == 0 else value

    def mean(self) -> float:
        return float(self._spline.integrate(0.0, self.period)) / self.period

    def integral(self, t0, t1):
        if np.ndim(t0) == 0 and np.ndim(t1) == 0:
            return float(self._spline.integrate(t0, t1))
        t0, t1 = np.broadcast_arrays(np.asarray(t0, dtype=float), np.asarray(t1, dtype=float))
        return np.array([self._spline.integrate(a, b) for a, b in zip(t0.ravel(), t1.ravel())]).reshape(t0.shape)

    def sup_abs(self) -> float:
        # 极值点在样条导数的零点或节点处
        critical = self._spline.derivative().roots(extrapolate=False)
        candidates = np.concatenate([self._spline.x, critical[(critical >= 0) & (critical <= self.period)]])
        return float(np.max(np.abs(self._spline(candidates))))


SignalSpec = Annotated[Union[ConstantSignal, SinusoidSignal, TableSignal], Field(discriminator="kind")]


def parse_signal(text: str) -> dict:
    """命令行写法: constant:15, sinusoid:a,T, table:FILE.csv,T"""
    kind, _, rest = text.partition(":")
    parts = [p for p in rest.split(",") if p]
    expected = {"constant": 1, "sinusoid": 2, "table": 2}.get(kind)
    if expected is not None and len(parts) != expected:
        raise ValueError(f"signal {kind!r} takes {expected} comma-separated parameters")
    match kind:
        case "constant":
            return {"kind": "constant", "c": parts[0]}
        case "sinusoid":
            return {"kind": "sinusoid", "a": parts[0], "period": parts[1]}
        case "table":
            try:
                samples = np.loadtxt(parts[0], delimiter=",", comments="#", ndmin=2)
            except OSError as exc:
                raise ValueError(f"cannot read signal table: {exc}") from exc
            return {"kind": "table", "grid": samples[:, 0], "values": samples[:, 1], "period": parts[1]}
    raise ValueError(f"unknown signal kind {kind!r}")
