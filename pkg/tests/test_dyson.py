import numpy as np
import pytest

from ptdyson import (
    DysonParams,
    EPConstants,
    TimeProfile,
    chi_closed_form,
    closed_form_trajectory,
    conjugate,
    dyson_residual,
    energy_operator,
    ep_dissipative_residual,
    fit_ep_constants,
    from_matrix,
    gamma_closed_form,
    gamma_closed_form_alt,
    gamma_rates,
    group_inverse,
    group_matrix,
    hermitian_counterpart,
    nonhermitian_hamiltonian,
    scenario_params,
    scenario_rates,
    solve_gamma_ode,
    to_matrix,
)
from ptdyson.errors import ConstraintViolationError, SingularEvaluationError

LAM = TimeProfile.sinusoid(0.5, 0.3, 1.0)
A = TimeProfile.sinusoid(1.0, 0.2, 2.0)


def test_constants_guard_and_conserved_combination():
    c = EPConstants(q2=1.0, q3=0.4)
    assert abs(c.kappa - 0.4 / np.sqrt(1.0 - 0.16)) < 1e-15
    with pytest.raises(ConstraintViolationError):
        EPConstants(q2=0.0, q3=1.0)
    with pytest.raises(ConstraintViolationError):
        EPConstants(q2=0.0, q3=-1.2)


def test_fit_constants_roundtrip():
    g3_0, g4_0 = 0.3, -0.25
    c = fit_ep_constants(g3_0, g4_0)
    g3, g4 = gamma_closed_form(LAM, c, 0.0)
    assert abs(g3 - g3_0) < 1e-12
    assert abs(g4 - g4_0) < 1e-12


def test_ode_constant_when_driver_vanishes():
    lam0 = TimeProfile.constant(0.0)
    times = np.linspace(0.0, 5.0, 40)
    traj = solve_gamma_ode(lam0, 0.7, -0.2, times)
    assert np.max(np.abs(traj.gamma3 - 0.7)) < 1e-10
    assert np.max(np.abs(traj.gamma4 + 0.2)) < 1e-10


def test_ode_decouples_when_gamma4_starts_at_zero():
    # g4 = 0 is a fixed line; g3 then falls at the running integral rate
    times = np.linspace(0.0, 6.0, 50)
    traj = solve_gamma_ode(LAM, 1.1, 0.0, times)
    assert np.max(np.abs(traj.gamma4)) < 1e-10
    want = 1.1 - np.array([LAM.cumulative(t) for t in times])
    assert np.max(np.abs(traj.gamma3 - want)) < 1e-8


@pytest.mark.parametrize("lam", [TimeProfile.constant(0.5), LAM])
def test_ode_matches_closed_form(lam):
    times = np.linspace(0.0, 8.0, 60)
    g3_0, g4_0 = 0.3, -0.25
    ode = solve_gamma_ode(lam, g3_0, g4_0, times)
    exact = closed_form_trajectory(lam, fit_ep_constants(g3_0, g4_0), times)
    assert exact.method == "closed_form"
    assert np.max(np.abs(ode.gamma3 - exact.gamma3)) < 1e-6
    assert np.max(np.abs(ode.gamma4 - exact.gamma4)) < 1e-6


def test_conserved_combination_drift():
    times = np.linspace(0.0, 8.0, 60)
    traj = solve_gamma_ode(LAM, 0.4, 0.35, times)
    cons = traj.conserved()
    assert np.max(np.abs(cons - cons[0])) < 1e-8


def test_closed_form_at_zero_coupling_constant():
    # q3 = 0 collapses to g3 = q2 - running integral, g4 = 0
    c = EPConstants(q2=1.0, q3=0.0)
    for t in (0.0, 0.8, 3.3):
        g3, g4 = gamma_closed_form(LAM, c, t)
        assert abs(g3 - (1.0 - LAM.cumulative(t))) < 1e-14
        assert g4 == 0.0


def test_closed_form_satisfies_constraint_system():
    c = EPConstants(q2=1.0, q3=0.4)
    h = 1e-5
    for t in (0.3, 1.2, 2.9, 6.5):
        g3m, g4m = gamma_closed_form(LAM, c, t - h)
        g3p, g4p = gamma_closed_form(LAM, c, t + h)
        g3, g4 = gamma_closed_form(LAM, c, t)
        want3, want4 = gamma_rates(LAM(t), g3, g4)
        assert abs((g3p - g3m) / (2 * h) - want3) < 1e-7
        assert abs((g4p - g4m) / (2 * h) - want4) < 1e-7


def test_alternative_closed_form_agrees():
    c = EPConstants(q2=1.0, q3=0.4)
    for t in (0.0, 0.4, 1.0):
        g3, g4 = gamma_closed_form(LAM, c, t)
        a3, a4 = gamma_closed_form_alt(LAM, c, t)
        assert abs(g3 - a3) < 1e-9
        assert abs(g4 - a4) < 1e-9
    with pytest.raises(ConstraintViolationError):
        gamma_closed_form_alt(LAM, EPConstants(q2=1.0, q3=1e-4), 0.5)


def test_scale_function_is_cosh_of_angle():
    c = EPConstants(q2=1.0, q3=0.4)
    chi = chi_closed_form(LAM, c)
    for t in (0.0, 0.7, 2.5, 5.0):
        g3, _ = gamma_closed_form(LAM, c, t)
        assert abs(chi(t) - np.cosh(g3)) < 1e-12


def test_dissipative_equation_zero_coupling():
    c = EPConstants(q2=1.0, q3=0.0)
    chi = chi_closed_form(LAM, c)
    for t in (0.3, 1.1, 2.6):
        assert ep_dissipative_residual(chi, LAM, c.kappa, t) < 1e-8


def test_dissipative_equation_generic():
    c = EPConstants(q2=1.0, q3=0.4)
    chi = chi_closed_form(LAM, c)
    for t in (0.3, 1.1, 2.6):
        assert ep_dissipative_residual(chi, LAM, c.kappa, t) < 1e-8


def test_dissipative_equation_rejects_bystander():
    # a smooth positive function that solves nothing
    fake = lambda t: 1.0 + 0.3 * np.sin(2.0 * t)
    c = EPConstants(q2=1.0, q3=0.4)
    for t in (0.3, 1.1, 2.6):
        assert ep_dissipative_residual(fake, LAM, c.kappa, t) > 1e-3


def test_dissipative_equation_guards_vanishing_driver():
    c = EPConstants(q2=1.0, q3=0.4)
    chi = chi_closed_form(LAM, c)
    with pytest.raises(SingularEvaluationError):
        ep_dissipative_residual(chi, TimeProfile.constant(0.0), c.kappa, 1.0)


def test_hermitian_counterpart_degenerate_cases():
    for elem in (
        hermitian_counterpart(1.3, 0.0, 0.8, -0.4),
        hermitian_counterpart(1.3, 0.7, 0.8, 0.0),
    ):
        assert np.max(np.abs(elem.vector - np.array([1.3, 1.3, 0, 0]))) < 1e-15
    generic = hermitian_counterpart(1.0, 0.5, 0.3, 0.2)
    assert generic.is_hermitian()


def test_energy_operator_degenerate_cases():
    for elem in (
        energy_operator(1.3, 0.0, 0.8, -0.4),
        energy_operator(1.3, 0.7, 0.8, 0.0),
    ):
        assert np.max(np.abs(elem.vector - np.array([1.3, 1.3, 0, 0]))) < 1e-15


def test_energy_operator_is_conjugated_counterpart():
    # closed form must equal the matrix conjugation eta^-1 h eta for
    # arbitrary angles, not only on the constraint manifold
    rng = np.random.default_rng(41)
    for _ in range(10):
        a_v, lam_v = rng.uniform(0.5, 1.5), rng.uniform(-1.0, 1.0)
        g3, g4 = rng.normal(scale=0.8, size=2)
        params = DysonParams(0.0, 0.0, g3, g4)
        h = hermitian_counterpart(a_v, lam_v, g3, g4)
        ref = from_matrix(
            group_inverse(params) @ to_matrix(h) @ group_matrix(params)
        )
        got = energy_operator(a_v, lam_v, g3, g4)
        assert np.max(np.abs(got.vector - ref.vector)) < 1e-12


def test_residual_vanishes_for_static_map():
    lam0 = TimeProfile.constant(0.0)
    params = DysonParams(0.0, 0.0, 0.9, -0.3)
    # the coupling term is exactly absent; what remains is rounding in the
    # matrix sandwich
    assert dyson_residual(A, lam0, params, np.zeros(4), 1.7) < 1e-14


def test_residual_small_on_closed_form_trajectory():
    c = EPConstants(q2=1.0, q3=0.4)
    for t in (0.0, 0.7, 2.2, 5.9, 9.4):
        params = scenario_params(c, LAM, t)
        rates = scenario_rates(c, LAM, t)
        assert dyson_residual(A, LAM, params, rates, t) < 1e-8


def test_residual_detects_off_manifold_parameters():
    c = EPConstants(q2=1.0, q3=0.4)
    t = 1.3
    params = scenario_params(c, LAM, t)
    rates = scenario_rates(c, LAM, t)
    bad = DysonParams(0.0, 0.0, params.gamma3 + 0.1, params.gamma4)
    assert dyson_residual(A, LAM, bad, rates, t) > 1e-3


def test_scenario_rates_match_difference_quotient():
    c = EPConstants(q2=1.0, q3=0.4)
    h = 1e-5
    for t in (0.4, 1.9, 7.2):
        plus = scenario_params(c, LAM, t + h).as_array()
        minus = scenario_params(c, LAM, t - h).as_array()
        fd = (plus - minus) / (2 * h)
        assert np.max(np.abs(scenario_rates(c, LAM, t) - fd)) < 1e-7


def test_first_angle_drops_out():
    # equal first two angles sit in the commutant, so the residual and the
    # Hermitian image cannot depend on them
    c = EPConstants(q2=1.0, q3=0.4)
    t = 2.1
    rates = scenario_rates(c, LAM, t)
    r0 = dyson_residual(A, LAM, scenario_params(c, LAM, t, q1=0.0), rates, t)
    r1 = dyson_residual(A, LAM, scenario_params(c, LAM, t, q1=0.7), rates, t)
    assert abs(r0 - r1) < 1e-12
    big_h = nonhermitian_hamiltonian(A(t), LAM(t))
    img0 = conjugate(scenario_params(c, LAM, t, q1=0.0), big_h)
    img1 = conjugate(scenario_params(c, LAM, t, q1=0.7), big_h)
    assert np.max(np.abs(img0.vector - img1.vector)) < 1e-12
