import copy
import logging
from concurrent.futures import ProcessPoolExecutor

from src.config import config
from src.errors import EmptyEnsemble
from src.stochsys.monitors import PathMonitor
from src.stochsys.rng import stream_normals
from src.stochsys.xhh import advance_batch, check_xhh_start, n_steps_for

logger = logging.getLogger(__name__)


def _run_batch(task: tuple):
    x0, spec, signal, dt, n_steps, seed, first, count, monitor, t0 = task
    normals = stream_normals(seed, first, count, n_steps)
    advance_batch(x0, spec, signal, dt, normals, monitor, t0)
    return monitor.result()


def run_ensemble(x0, spec, signal, t_end: float, dt: float, seed: int, trials: int, monitor: PathMonitor,
                 workers: int | None = None, batch_size: int | None = None, t0: float = 0.0):
    """trials 条 (ξHH) 路径，第 i 条用 RngStream(seed, i)；结果按批次顺序折叠"""
    x0 = check_xhh_start(x0, spec, signal, dt, t_end)
    if trials < 1:
        raise EmptyEnsemble(f"an ensemble needs at least one path, got trials = {trials}")
    workers = workers or config.workers
    batch_size = batch_size or config.batch_size
    n_steps = n_steps_for(t_end, dt)
    tasks = [
        (x0, spec, signal, dt, n_steps, seed, first, min(batch_size, trials - first), copy.deepcopy(monitor), t0)
        for first in range(0, trials, batch_size)
    ]
    logger.info("running %d paths of %d steps in %d batches on %d worker(s)", trials, n_steps, len(tasks), workers)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_batch, tasks))
    else:
        parts = []
        for index, task in enumerate(tasks):
            parts.append(_run_batch(task))
            logger.info("batch %d/%d done", index + 1, len(tasks))
    return monitor.combine(parts)
