from src.model.diffusion import CIRInput, InputDiffusionSpec, OUInput
from src.model.results import (
    BallTarget,
    BracketSet,
    ControlledTrajectory,
    ControlProblem,
    HormanderReport,
    KdeEstimate,
    OrbitScan,
    OrbitSummary,
    ResponseRegime,
    ResponseSummary,
    TubeResult,
)
from src.model.signal import ConstantSignal, SignalSpec, SinusoidSignal, TableSignal, parse_signal
from src.model.states import Path5, State4, State5, Trajectory4, containment_level
