from typing import Annotated

import numpy as np
from pydantic import Field

from src.cli.export import write_csv
from src.cli.params import MonteCarloParams
from src.cli.router import CommandRouter
from src.detsys import find_equilibrium
from src.model import State5
from src.stochsys import MomentTrace, RngStream, moment_summary, run_ensemble, simulate_xhh

router = CommandRouter(tags=["stochsys"])


class SimulateParams(MonteCarloParams):
    t_end: Annotated[float, Field(title="模拟时长 (ms)", gt=0)] = 50.0
    record_every: Annotated[int, Field(title="汇总输出的步数间隔", ge=1)] = 10


def start_state(params: MonteCarloParams) -> State5:
    """给定 start 时直接使用；否则取 F∞(v) = 0 的平衡点，ζ = S(0)"""
    if params.start is not None:
        return State5.from_array(params.start)
    return State5.extend(find_equilibrium(0.0), float(params.signal(0.0)))


@router.command("simulate", SimulateParams)
def cmd_simulate(params: SimulateParams) -> None:
    """一条 (ξHH) 路径，或系综的矩汇总"""
    x0 = start_state(params)
    spec = params.input_spec()
    if params.trials == 1:
        path = simulate_xhh(x0, spec, params.signal, params.t_end, params.dt, RngStream(seed=params.seed))
        rows = (np.concatenate([[t], state]) for t, state in zip(path.times, path.states))
        trailer = (f"exit_level={'none' if path.exit_level is None else path.exit_level}",)
        write_csv(params.out, ("t", "v", "n", "m", "h", "zeta"), rows, params, trailer)
        return
    count, sums = run_ensemble(x0, spec, params.signal, params.t_end, params.dt, params.seed, params.trials,
                               MomentTrace(params.record_every), workers=params.workers)
    summary = moment_summary(count, sums)
    times = params.dt * params.record_every * np.arange(summary.shape[1])
    write_csv(params.out, ("t", "mean_v", "var_v", "mean_zeta", "var_zeta"),
              (np.concatenate([[t], column]) for t, column in zip(times, summary.T)), params)
