from src.analysis.averages import OUStationaryLaw, moving_average_M, ou_stationary
from src.analysis.control import control_energy, control_h_dot, integrate_controlled
from src.analysis.laplace import (
    cir_laplace_mc,
    cir_laplace_printed,
    cir_laplace_riccati,
    cir_stationary_laplace,
    cir_stationary_laplace_mc,
    laplace_comparison,
    printed_kernel,
    riccati_kernel,
)
from src.analysis.probes import (
    ball_hit_probability,
    ballhit_preset,
    corollary_target,
    endpoint_samples,
    kde_positivity_probe,
    orbit_anchor,
    orbit_target,
    scott_bandwidth,
    tube_probability,
    tube_reference,
    tube_sweep,
    wilson_interval,
)
