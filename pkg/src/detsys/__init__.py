from src.detsys.equilibrium import equilibrium_state, find_equilibrium
from src.detsys.integrate import MAX_DET_STEP, check_step, hh_rhs, integrate_det, step_count
from src.detsys.orbit import classify_response, detect_orbit, upcrossings
