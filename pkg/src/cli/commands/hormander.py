import logging
from typing import Annotated

from typing_extensions import Self

import numpy as np
from pydantic import Field, model_validator

from src.cli.export import sibling, write_csv
from src.cli.params import CommandParams, DiffusionParams
from src.cli.router import CommandRouter
from src.hormander import brackets_closed_form, equilibrium_curve, hormander_report, scan_equilibrium_curve
from src.model import State5

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["hormander"])


class ScanHormanderParams(CommandParams):
    v_lo: Annotated[float, Field(title="扫描下界 (mV)")] = -15.0
    v_hi: Annotated[float, Field(title="扫描上界 (mV)")] = 30.0
    grid_n: Annotated[int, Field(title="网格数", ge=100)] = 2000
    zeros_out: Annotated[str | None, Field(title="零点文件，默认为 <out>_zeros.csv")] = None

    @model_validator(mode="after")
    def _check_range(self) -> Self:
        if not self.v_lo < self.v_hi:
            raise ValueError(f"scan range must satisfy v_lo < v_hi, got ({self.v_lo}, {self.v_hi})")
        return self


@router.command("scan-hormander", ScanHormanderParams)
def cmd_scan_hormander(params: ScanHormanderParams) -> None:
    """平衡曲线上的 D 及其零点；零点同时写入文末注释行"""
    v, D = equilibrium_curve(params.v_lo, params.v_hi, params.grid_n)
    zeros = scan_equilibrium_curve(params.v_lo, params.v_hi, params.grid_n)
    logger.info("%d zeros of D on [%g, %g]", len(zeros), params.v_lo, params.v_hi)
    trailer = ("zeros=" + " ".join(repr(z) for z in zeros),)
    write_csv(params.out, ("v", "D"), zip(v, D), params, trailer)
    zeros_out = params.zeros_out or (None if params.out == "-" else sibling(params.out, "zeros"))
    if zeros_out is not None:
        write_csv(zeros_out, ("v_zero",), [(z,) for z in zeros], params)


class BracketsParams(DiffusionParams):
    point: Annotated[list[float], Field(title="状态 v n m h zeta", min_length=5, max_length=5)] = [
        0.0, 0.3177, 0.0529, 0.5961, 0.0
    ]
    t: Annotated[float, Field(title="时间 (ms)")] = 0.0
    tol_D: Annotated[float, Field(title="D 的归一化阈值", gt=0)] = 1e-8


@router.command("brackets", BracketsParams)
def cmd_brackets(params: BracketsParams) -> None:
    """单点处的 σ, V2..V5；最后一列为 e1 + e5 的系数"""
    x = State5.from_array(params.point)
    spec = params.input_spec()
    brackets = brackets_closed_form(params.t, x, spec, params.signal)
    report = hormander_report(params.t, x, spec, params.signal, params.tol_D)
    coefficients = np.concatenate([[spec.d(x.zeta)], brackets.A])
    rows = [(name, *vector, a) for (name, vector), a in zip(brackets.vectors().items(), coefficients)]
    trailer = (
        f"D={report.D_value!r} D_normalized={report.D_normalized!r} "
        f"min_singular_value={report.min_singular_value!r} V_L_gram={report.V_L_gram!r} "
        f"in_O={str(report.in_O).lower()}",
    )
    write_csv(params.out, ("vector", "c1", "c2", "c3", "c4", "c5", "A"), rows, params, trailer)
