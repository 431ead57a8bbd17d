from typing import Annotated

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

UINT64 = 2**64


class RngStream(BaseModel):
    """计数器型随机流：同一 (seed, stream_id) 给出同样的增量"""
    model_config = ConfigDict(frozen=True)

    seed: Annotated[int, Field(title="随机种子", ge=0, lt=UINT64)]
    stream_id: Annotated[int, Field(title="随机流编号", ge=0, lt=UINT64)] = 0

    def generator(self) -> np.random.Generator:
        """以 (seed, stream_id) 为键的新 Philox 生成器"""
        return np.random.Generator(np.random.Philox(key=(self.seed << 64) | self.stream_id))

    def normals(self, n: int) -> np.ndarray:
        """该流的前 n 个标准正态数，第 k 个驱动第 k 步"""
        return self.generator().standard_normal(n)

    def spawn(self, offset: int) -> "RngStream":
        return RngStream(seed=self.seed, stream_id=self.stream_id + offset)


def stream_normals(seed: int, first: int, count: int, n_steps: int) -> np.ndarray:
    """路径 first .. first+count-1 的 (count, n_steps) 正态数"""
    out = np.empty((count, n_steps))
    for i in range(count):
        out[i] = RngStream(seed=seed, stream_id=first + i).normals(n_steps)
    return out
