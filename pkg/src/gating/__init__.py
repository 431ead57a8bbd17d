from src.gating.jet import DEFAULT_ORDER, Jet
from src.gating.rates import (
    PHI_SERIES_RADIUS,
    RATE_FUNCTIONS,
    RateKind,
    all_rates,
    current_F,
    F_infty,
    F_infty_jet,
    g_value_and_v_derivs,
    gating_drift,
    phi,
    phi_jet,
    phi_of,
    rates,
    rates_jet,
    steady_state,
)
