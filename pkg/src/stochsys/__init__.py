from src.stochsys.ensemble import run_ensemble
from src.stochsys.input import (
    InputScheme,
    grid_chain,
    grid_chain_ensemble,
    simulate_input,
    simulate_input_ensemble,
)
from src.stochsys.monitors import FinalState, MomentTrace, PathMonitor, PathRecorder, TubeDistance, moment_summary
from src.stochsys.rng import RngStream, stream_normals
from src.stochsys.xhh import advance_batch, simulate_xhh
