"""命令参数块：拒绝未知字段，信号与扩散参数在数值计算前互相校验"""
from typing import Annotated, Literal

from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

from src.config import config
from src.model import CIRInput, ConstantSignal, OUInput, SignalSpec, State5, parse_signal

_signal_adapter = TypeAdapter(SignalSpec)


def signal_from(value) -> SignalSpec:
    """命令行字符串或 JSON 对象 -> SignalSpec"""
    if isinstance(value, str):
        value = parse_signal(value)
    return _signal_adapter.validate_python(value)


class CommandParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    out: Annotated[str, Field(title="输出文件，- 为标准输出")] = "-"


class SignalParams(CommandParams):
    signal: Annotated[SignalSpec, Field(title="输入信号，如 constant:15 或 sinusoid:1,10")] = ConstantSignal(c=0.0)

    @field_validator("signal", mode="before")
    @classmethod
    def _parse_signal(cls, value):
        return signal_from(value)


class DiffusionParams(SignalParams):
    diffusion: Annotated[Literal["ou", "cir"], Field(title="输入扩散类型")] = "ou"
    tau: Annotated[float, Field(title="回复速率 τ", gt=0)] = 1.0
    gamma: Annotated[float, Field(title="扩散强度 γ", ge=0)] = 1.0
    K: Annotated[float | None, Field(title="CIR 平移常数 K", gt=0)] = None

    def input_spec(self) -> OUInput | CIRInput:
        if self.diffusion == "ou":
            return OUInput(tau=self.tau, gamma=self.gamma)
        return CIRInput(tau=self.tau, gamma=self.gamma, K=self.K)

    @model_validator(mode="after")
    def _check_diffusion(self) -> Self:
        if self.diffusion == "cir":
            if self.K is None:
                raise ValueError("the CIR input needs K")
            bound = 0.5 * self.gamma**2 + self.signal.sup_abs()
            if not self.K > bound:
                raise ValueError(f"CIR input needs K > γ²/2 + sup|S| = {bound:.6g}, got K = {self.K:.6g}")
        return self


class MonteCarloParams(DiffusionParams):
    dt: Annotated[float, Field(title="步长 (ms)", gt=0)] = config.default_dt_mc
    seed: Annotated[int, Field(title="随机种子", ge=0, lt=2**64)] = 0
    trials: Annotated[int, Field(title="路径数", ge=1)] = 1
    workers: Annotated[int, Field(title="工作进程数", ge=1)] = config.workers
    start: Annotated[list[float] | None, Field(title="初始状态 v n m h zeta")] = None

    @field_validator("start")
    @classmethod
    def _check_start(cls, value):
        if value is not None:
            State5.from_array(value)
        return value
