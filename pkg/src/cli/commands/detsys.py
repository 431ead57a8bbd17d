from typing import Annotated

from typing_extensions import Self

from pydantic import Field, model_validator

from src.cli.export import write_csv
from src.cli.params import CommandParams, SignalParams
from src.cli.router import CommandRouter
from src.config import config
from src.detsys import MAX_DET_STEP, classify_response, detect_orbit, find_equilibrium
from src.gating import F_infty
from src.hormander import scan_orbit
from src.model import ConstantSignal

router = CommandRouter(tags=["detsys"])


class EquilibriumParams(CommandParams):
    c: Annotated[list[float], Field(title="常数输入 c", min_length=1)] = [15.0]


@router.command("equilibrium", EquilibriumParams)
def cmd_equilibrium(params: EquilibriumParams) -> None:
    """常数输入下 (HH) 的平衡点 (v, n∞, m∞, h∞)"""
    rows = []
    for c in params.c:
        state = find_equilibrium(c)
        rows.append((c, state.v, state.n, state.m, state.h, abs(F_infty(state.v) - c)))
    write_csv(params.out, ("c", "v", "n", "m", "h", "residual"), rows, params)


class OrbitParams(CommandParams):
    c: Annotated[float, Field(title="常数输入 c")] = 15.0
    transient: Annotated[float, Field(title="丢弃的暂态 (ms)", ge=0)] = 60.0
    horizon: Annotated[float, Field(title="积分时长 (ms)", gt=0)] = 200.0
    dt: Annotated[float, Field(title="步长 (ms)", gt=0, le=MAX_DET_STEP)] = config.default_dt_orbit
    kick: Annotated[float, Field(title="初始电压扰动 (mV)")] = 1.0

    @model_validator(mode="after")
    def _check_window(self) -> Self:
        if not self.horizon > self.transient:
            raise ValueError("horizon must exceed the transient")
        return self


@router.command("orbit", OrbitParams)
def cmd_orbit(params: OrbitParams) -> None:
    """稳定轨道最后一圈及其上的 D"""
    orbit = detect_orbit(ConstantSignal(c=params.c), params.transient, params.horizon, params.dt, params.kick)
    scan = scan_orbit(orbit)
    rows = ((t, *state, value) for t, state, value in zip(scan.times, orbit.orbit_samples.states, scan.D))
    trailer = (
        f"period={orbit.period!r} superposition_error={orbit.superposition_error!r} "
        f"converged={str(orbit.converged).lower()}",
    )
    write_csv(params.out, ("t", "v", "n", "m", "h", "D"), rows, params, trailer)


class ResponseParams(SignalParams):
    transient: Annotated[float, Field(title="丢弃的暂态 (ms)", ge=0)] = 100.0
    periods: Annotated[int, Field(title="观察的周期数", ge=4)] = 20
    dt: Annotated[float, Field(title="步长 (ms)", gt=0, le=MAX_DET_STEP)] = 0.01


@router.command("response", ResponseParams)
def cmd_response(params: ResponseParams) -> None:
    """确定性响应的频闪分类"""
    summary = classify_response(params.signal, params.transient, params.periods, params.dt)
    write_csv(
        params.out,
        ("regime", "lock_multiple", "spikes_per_period", "stroboscopic_spread"),
        [(summary.regime.value, summary.lock_multiple, summary.spikes_per_period, summary.stroboscopic_spread)],
        params,
    )
