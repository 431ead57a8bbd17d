import logging

from scipy import optimize

from src.errors import NoBracket
from src.gating import F_infty, F_infty_jet, RateKind, steady_state
from src.model import State4

logger = logging.getLogger(__name__)

BRACKET = (-50.0, 50.0)


def equilibrium_state(v: float) -> State4:
    """(v, n∞(v), m∞(v), h∞(v))"""
    return State4(v=v, **{kind.value: float(steady_state(kind, v)) for kind in RateKind})


def find_equilibrium(c: float, tol: float = 1e-10) -> State4:
    """求 F∞(v) = c：先二分，再用 jet 导数做 Newton 修正"""
    lo, hi = BRACKET
    f_lo, f_hi = F_infty(lo) - c, F_infty(hi) - c
    if f_lo * f_hi > 0:
        raise NoBracket(f"c = {c} lies outside [F∞({lo}), F∞({hi})] = [{f_lo + c:.6g}, {f_hi + c:.6g}]")
    v = optimize.bisect(lambda x: F_infty(x) - c, lo, hi, xtol=1e-12)
    for iteration in range(8):
        jet = F_infty_jet(v, order=1)
        residual = float(jet.coeffs[0]) - c
        logger.debug("Newton polish %d: v=%.15g residual=%.3e", iteration, v, residual)
        if abs(residual) < 0.1 * tol:
            break
        v -= residual / float(jet.coeffs[1])
    return equilibrium_state(v)
