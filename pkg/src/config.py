import logging
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

from pydantic import BaseModel, Field


class Config(BaseModel):
    log_level: str = Field("INFO", title="Log Level", description="Root log level for the lab loggers")
    batch_size: int = Field(1000, gt=0, title="Batch Size", description="Paths advanced together in one vectorized ensemble batch")
    workers: int = Field(1, gt=0, title="Workers", description="Default number of ensemble worker processes")
    default_dt_mc: float = Field(0.01, gt=0, title="Monte-Carlo Step", description="Default time step (ms) for stochastic ensembles")
    default_dt_orbit: float = Field(0.001, gt=0, title="Orbit Step", description="Default time step (ms) for orbit work")


def load_config(path: str | Path = "config.toml") -> Config:
    """读取 config.toml 的 [lab] 表"""
    path = Path(path)
    if not path.is_file():
        return Config()
    with path.open("rb") as fp:
        document = tomllib.load(fp)
    return Config.model_validate(document.get("lab", {}))


def setup_logging(level: str | int = "INFO") -> None:
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level if isinstance(level, int) else level.upper())


config = load_config()
