"""带一行 provenance 注释的 CSV 输出

浮点数以 repr 写出，读回时有限值逐位一致。路径 "-" 表示标准输出。
"""
import csv
import json
import sys
from contextlib import contextmanager
from hashlib import sha256
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from pydantic import BaseModel

from src import __version__


OUTPUT_FIELDS = {"out", "zeros_out"}


def config_hash(params: BaseModel) -> str:
    """参数的 sha256 前 16 位，不含输出路径"""
    values = params.model_dump(mode="json", exclude=OUTPUT_FIELDS)
    document = json.dumps(values, sort_keys=True, separators=(",", ":"))
    return sha256(document.encode("utf-8")).hexdigest()[:16]


def provenance(params: BaseModel) -> str:
    seed = getattr(params, "seed", None)
    return f"# xhh-lab {__version__} config={config_hash(params)} seed={'none' if seed is None else seed}"


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "" if value is None else str(value)


@contextmanager
def _open(path: str):
    if path == "-":
        yield sys.stdout
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fp:
        yield fp


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence], params: BaseModel,
              trailer: Sequence[str] = ()) -> None:
    """写出 provenance 行、表头与数据行；trailer 为文末的注释行"""
    with _open(path) as fp:
        fp.write(provenance(params) + "\n")
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
        for line in trailer:
            fp.write(f"# {line}\n")


def read_csv(path: str) -> tuple[list[str], np.ndarray]:
    """读回 write_csv 写出的表头与浮点行，跳过注释行"""
    with open(path, newline="", encoding="utf-8") as fp:
        lines = [line for line in fp if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    rows = [[float(cell) if cell else np.nan for cell in row] for row in reader]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))


def sibling(path: str, suffix: str) -> str:
    """`out.csv` -> `out_<suffix>.csv`"""
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{suffix}{p.suffix or '.csv'}"))
