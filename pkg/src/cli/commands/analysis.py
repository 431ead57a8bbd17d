from typing import Annotated, Literal

from pydantic import Field, field_validator

from src.analysis import ball_hit_probability, ballhit_preset, laplace_comparison, tube_sweep
from src.cli.commands.stochsys import start_state
from src.cli.export import write_csv
from src.cli.params import DiffusionParams, MonteCarloParams, signal_from
from src.cli.router import CommandRouter
from src.model import ControlProblem, SignalSpec
from src.stochsys import RngStream

router = CommandRouter(tags=["analysis"])

HIT_HEADER = ("epsilon", "trials", "hits", "ci_lo", "ci_hi")


def _hit_rows(results):
    return [(r.epsilon, r.trials, r.hits, *r.wilson_ci) for r in results]


class TubeParams(MonteCarloParams):
    target: Annotated[SignalSpec | None, Field(title="目标信号 S̃，默认与驱动信号相同")] = None
    epsilon: Annotated[list[float], Field(title="管道半径", min_length=1)] = [1.0]
    t_end: Annotated[float, Field(title="时间范围 (ms)", gt=0)] = 10.0
    trials: Annotated[int, Field(title="路径数", ge=1)] = 10_000

    @field_validator("target", mode="before")
    @classmethod
    def _parse_target(cls, value):
        return None if value is None else signal_from(value)


@router.command("tube", TubeParams)
def cmd_tube(params: TubeParams) -> None:
    """目标信号驱动的 (HH) 轨迹周围的管道命中数"""
    problem = ControlProblem(
        start=start_state(params),
        driving_signal=params.signal,
        target_signal=params.target or params.signal,
        spec=params.input_spec(),
        horizon=params.t_end,
    )
    results = tube_sweep(problem, params.epsilon, params.trials, params.dt, RngStream(seed=params.seed),
                         params.workers)
    write_csv(params.out, HIT_HEADER, _hit_rows(results), params)


class BallhitParams(MonteCarloParams):
    preset: Annotated[Literal["corollary", "orbit"], Field(title="起点与目标的取法")] = "corollary"
    c: Annotated[float | None, Field(title="常数输入 c，默认 corollary 为 1，orbit 为 15")] = None
    zeta: Annotated[float, Field(title="起点的 ζ")] = 0.0
    epsilon: Annotated[float, Field(title="球半径", gt=0)] = 1.0
    t: Annotated[float | None, Field(title="时刻 (ms)，orbit 预设默认一个轨道周期", gt=0)] = None
    trials: Annotated[int, Field(title="路径数", ge=1)] = 10_000


@router.command("ballhit", BallhitParams)
def cmd_ballhit(params: BallhitParams) -> None:
    """t 时刻 X_t 落入目标点 ε 球的次数"""
    signal = params.signal if "signal" in params.model_fields_set else None
    target = ballhit_preset(params.preset, params.c, params.zeta, params.t, signal)
    result = ball_hit_probability(target.start, target.target, params.epsilon, target.t, params.input_spec(),
                                  target.signal, params.trials, params.dt, RngStream(seed=params.seed),
                                  params.workers)
    write_csv(params.out, HIT_HEADER, _hit_rows([result]), params)


class LaplaceParams(DiffusionParams):
    diffusion: Annotated[Literal["cir"], Field(title="输入扩散类型")] = "cir"
    K: Annotated[float, Field(title="CIR 平移常数 K", gt=0)] = 3.0
    gamma: Annotated[float, Field(title="扩散强度 γ", ge=0)] = 0.5
    s: Annotated[float, Field(title="起始时刻 (ms)", ge=0)] = 0.0
    t: Annotated[float, Field(title="终止时刻 (ms)", gt=0)] = 2.0
    zeta_s: Annotated[float, Field(title="ξ_s")] = 0.0
    lambdas: Annotated[list[float], Field(title="λ 值", min_length=1)] = [0.0, 0.1, 1.0]
    trials: Annotated[int, Field(title="路径数", ge=2)] = 100_000
    dt: Annotated[float, Field(title="步长 (ms)", gt=0)] = 0.005
    seed: Annotated[int, Field(title="随机种子", ge=0, lt=2**64)] = 0


@router.command("laplace", LaplaceParams)
def cmd_laplace(params: LaplaceParams) -> None:
    """E[exp(-λ ξ̃_t)]：printed 公式、Riccati 解与 Monte-Carlo 对照"""
    rows = laplace_comparison(params.s, params.t, params.lambdas, params.signal, params.input_spec(), params.zeta_s,
                              params.trials, params.dt, params.seed)
    write_csv(params.out, ("lambda", "printed", "riccati", "mc", "mc_stderr"), rows, params)
