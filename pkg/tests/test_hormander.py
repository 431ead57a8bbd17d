import itertools

import numpy as np
import pytest

from src.detsys import equilibrium_state
from src.errors import ConfigError
from src.gating import RATE_FUNCTIONS, RateKind, g_value_and_v_derivs, steady_state
from src.hormander import (
    bracket_matrices,
    brackets_closed_form,
    determinant_D,
    diffusion_field,
    equilibrium_D,
    hormander_report,
    lie_bracket,
    min_singular_value,
    normalized_D,
    oracle_vectors,
    scan_equilibrium_curve,
    scan_orbit,
    stratonovich_drift,
    xhh_fields,
)
from src.hormander.determinant import derivative_matrix
from src.model import CIRInput, ConstantSignal, OUInput, State5
from tests import oracles


def _random_states(rng, count, v_range=(-15.0, 30.0), zeta_range=(-3.0, 3.0)):
    v = rng.uniform(*v_range, count)
    gates = rng.uniform(0.05, 0.95, (3, count))
    zeta = rng.uniform(*zeta_range, count)
    return np.column_stack([v, gates.T, zeta])


def _zero_on_curve() -> float:
    (zero,) = scan_equilibrium_curve(10.5, 11.5, 200)
    return zero


def test_D_negative_at_rest():
    rest = equilibrium_state(0.0)
    assert determinant_D(rest) < 0
    assert equilibrium_D(0.0) == pytest.approx(determinant_D(rest), rel=1e-14)


def test_D_against_contour_oracle():
    rng = np.random.default_rng(50)
    for _ in range(50):
        v = rng.uniform(-40.0, 60.0)
        n, m, h = rng.uniform(0.0, 1.0, 3)
        expected, scale = oracles.determinant(v, n, m, h)
        assert abs(determinant_D((v, n, m, h)) - expected) <= 1e-5 * scale


def test_D_is_multilinear_in_gates():
    rng = np.random.default_rng(8)
    for _ in range(5):
        v = rng.uniform(-20.0, 40.0)
        point = rng.uniform(0.0, 1.0, 3)
        corners = {c: determinant_D((v, *map(float, c))) for c in itertools.product((0.0, 1.0), repeat=3)}
        interpolated = sum(
            value * np.prod([x if bit else 1.0 - x for x, bit in zip(point, corner)])
            for corner, value in corners.items()
        )
        scale = max(abs(value) for value in corners.values())
        assert determinant_D((v, *point)) == pytest.approx(interpolated, abs=1e-10 * scale)


def test_D_vanishes_for_repeated_rows():
    doubled = {RateKind.N: RATE_FUNCTIONS[RateKind.N], RateKind.M: RATE_FUNCTIONS[RateKind.N],
               RateKind.H: RATE_FUNCTIONS[RateKind.H]}
    for v in (-10.0, 5.0, 30.0):
        state = (v, 0.4, 0.4, 0.7)
        rows = [g_value_and_v_derivs(kind, v, x, 3, rate_functions=doubled)[1:]
                for kind, x in zip(RateKind, state[1:])]
        scale = np.prod([np.linalg.norm(row) for row in rows])
        assert abs(determinant_D(state, rate_functions=doubled)) <= 1e-12 * scale


def test_normalized_D_in_unit_interval():
    points = _random_states(np.random.default_rng(4), 200, v_range=(-60.0, 80.0))
    values = normalized_D(tuple(points[:, :4].T))
    assert values.shape == (200,)
    assert np.all(np.abs(values) <= 1.0)


def test_equilibrium_scan_finds_single_zero():
    zeros = scan_equilibrium_curve(-15.0, 30.0, 2000)
    assert len(zeros) == 1
    assert 10.5 < zeros[0] < 11.5
    assert abs(normalized_D(equilibrium_state(zeros[0]))) < 1e-8


def test_no_zero_near_rest():
    assert scan_equilibrium_curve(-5.0, 5.0, 500) == []


@pytest.mark.parametrize("v_lo,v_hi,grid_n", [(5.0, -5.0, 500), (-5.0, 5.0, 50)])
def test_scan_rejects_bad_grid(v_lo, v_hi, grid_n):
    with pytest.raises(ConfigError):
        scan_equilibrium_curve(v_lo, v_hi, grid_n)


def test_orbit_scan(orbit15):
    scan = scan_orbit(orbit15)
    inside = scan.segment.astype(bool)
    peak = np.max(np.abs(scan.D))
    strong = inside & (np.abs(scan.D) > 0.05 * peak)
    assert np.any(strong)
    assert np.all(scan.D[strong] < 0)
    assert scan.sign_changes >= 2
    # D 在动作电位峰值之后很快接近 0
    t_max = scan.times[np.argmax(scan.v)]
    after_peak = (scan.times >= t_max) & (scan.times <= t_max + 2.0)
    assert np.min(np.abs(scan.D[after_peak])) < 0.02 * peak


def test_stratonovich_drift(sinusoid):
    x = State5(v=3.0, n=0.3, m=0.1, h=0.5, zeta=0.7)
    ou = OUInput(tau=1.5, gamma=2.0)
    cir = CIRInput(tau=1.5, gamma=2.0, K=5.0)
    plain = stratonovich_drift(2.0, x, ou, sinusoid)
    shifted = stratonovich_drift(2.0, x, cir, sinusoid)
    np.testing.assert_allclose(plain - shifted, [1.5, 0.0, 0.0, 0.0, 1.5], rtol=1e-14)
    assert plain[4] == pytest.approx((sinusoid(2.0) - 0.7) * 1.5, rel=1e-14)
    at_signal = x.model_copy(update={"zeta": sinusoid(2.0)})
    assert stratonovich_drift(2.0, at_signal, ou, sinusoid)[4] == 0.0


def test_ou_closed_form(sinusoid):
    spec = OUInput(tau=1.0, gamma=2.0)
    x = State5(v=4.0, n=0.4, m=0.2, h=0.5, zeta=-0.3)
    brackets = brackets_closed_form(3.0, x, spec, sinusoid)
    d = spec.d(x.zeta)
    np.testing.assert_array_equal(brackets.sigma, d * np.array([1.0, 0.0, 0.0, 0.0, 1.0]))
    np.testing.assert_array_equal(diffusion_field(x, spec), brackets.sigma)
    assert brackets.A[0] == pytest.approx(d * spec.tau, rel=1e-14)
    np.testing.assert_array_equal(brackets.A[1:], 0.0)
    slopes = [g_value_and_v_derivs(kind, x.v, gate, 3)[1] for kind, gate in zip(RateKind, (x.n, x.m, x.h))]
    np.testing.assert_allclose(brackets.V3, d**2 * np.array([0.0, *(-s for s in slopes), 0.0]), rtol=1e-13,
                               atol=1e-15)
    for k, V in enumerate((brackets.V2, brackets.V3, brackets.V4, brackets.V5)):
        assert V[4] - brackets.A[k] == 0.0


def _assert_matches_oracle(closed, numeric):
    """closed: (5, 5) with columns σ, V2..V5; numeric: the same five vectors."""
    for k, W in enumerate(numeric):
        V = closed[:, k]
        atol = 1e-9 + 1e-6 * np.max(np.abs(V))
        np.testing.assert_allclose(W, V, rtol=1e-5, atol=atol, err_msg=f"column {k}")


@pytest.mark.parametrize("spec,zeta_range", [
    (OUInput(tau=1.0, gamma=2.0), (-3.0, 3.0)),
    (CIRInput(tau=1.0, gamma=2.0, K=10.0), (-2.0, 4.0)),
], ids=["ou", "cir"])
def test_closed_form_matches_oracle(spec, zeta_range, sinusoid):
    rng = np.random.default_rng(11)
    for t in np.linspace(0.0, 9.0, 10):
        points = _random_states(rng, 10, zeta_range=zeta_range)
        closed = bracket_matrices(t, points, spec, sinusoid)
        numeric = oracle_vectors(t, points, spec, sinusoid)
        for i in range(points.shape[0]):
            _assert_matches_oracle(closed[i], [vector[i] for vector in numeric])


def test_bracket_is_antisymmetric(sinusoid):
    drift, sigma = xhh_fields(CIRInput(tau=1.0, gamma=1.0, K=6.0), sinusoid)
    X = _random_states(np.random.default_rng(2), 5).T
    forward = lie_bracket(drift, sigma)(1.0, X)
    backward = lie_bracket(sigma, drift)(1.0, X)
    np.testing.assert_array_equal(forward, -backward)
    np.testing.assert_array_equal(lie_bracket(sigma, sigma)(1.0, X), 0.0)


def test_report_at_rest(ou):
    x = State5.extend(equilibrium_state(0.0), 0.0)
    report = hormander_report(0.0, x, ou, ConstantSignal(c=0.0))
    assert report.in_O
    assert report.D_value < 0
    assert report.min_singular_value > 0
    assert report.V_L_gram > 0


def test_bracket_determinant_factorizes(sinusoid):
    spec = OUInput(tau=1.0, gamma=2.0)
    points = _random_states(np.random.default_rng(1000), 1000, v_range=(-20.0, 60.0))
    matrices = bracket_matrices(0.5, points, spec, sinusoid)
    v, n, m, h = points[:, :4].T
    dF = 36.0 * n**4 + 120.0 * m**3 * h + 0.3
    D = determinant_D((v, n, m, h))
    factor = spec.d(0.0) ** 11 * dF
    scale = factor * np.prod(np.linalg.norm(derivative_matrix((v, n, m, h)), axis=-1), axis=-1)
    # det[σ V2 V3 V4 V5] = -d¹¹ ∂_vF D
    error = np.abs(np.linalg.det(matrices) + factor * D)
    assert np.all(error <= 1e-6 * factor * np.abs(D) + 1e-10 * scale)
    full_rank = min_singular_value(matrices) > 1e-8
    np.testing.assert_array_equal(full_rank, np.abs(normalized_D((v, n, m, h))) > 1e-8)


def test_rank_matches_D_along_equilibrium_curve(ou):
    v = np.linspace(-15.0, 30.0, 2001)
    gates = [steady_state(kind, v) for kind in RateKind]
    points = np.column_stack([v, *gates, np.zeros_like(v)])
    matrices = bracket_matrices(0.0, points, ou, ConstantSignal(c=0.0))
    full_rank = min_singular_value(matrices) > 1e-8
    nonzero_D = np.abs(normalized_D((v, *gates))) > 1e-8
    np.testing.assert_array_equal(full_rank, nonzero_D)


def test_rank_collapses_at_zero_of_D(ou):
    zero = _zero_on_curve()
    values = []
    for delta in (1e-1, 1e-3, 1e-5):
        x = State5.extend(equilibrium_state(zero + delta), 0.0)
        values.append(hormander_report(0.0, x, ou, ConstantSignal(c=0.0)).min_singular_value)
    assert values[0] > values[1] > values[2]
    assert values[2] < 1e-2 * values[0]
