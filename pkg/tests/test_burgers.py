import math

import numpy as np
import pytest
from scipy.integrate import quad

from heatkern import (BatemanWave, BurgersProblem, GridField, InitialData,
                      TravelingWaveSpec, burgers_residual, cole_hopf,
                      integrate_profile_direct, profile, solve_burgers_ivp,
                      solve_ivp, traveling_wave)
from heatkern.burgers import _is_classical, log_inner_integral
from heatkern.errors import DomainError, SingularityError
from heatkern._differences import d1_uniform4


# -------------------------------------------------------------------- cole_hopf

def test_cole_hopf_exponential():
    xs = np.linspace(-1.0, 1.0, 401)
    u = GridField(xs, [0.0], np.exp(-xs)[None, :])
    v = cole_hopf(u)
    assert np.max(np.abs(v.values[0][3:-3] - 2.0)) < 1e-9
    assert np.max(np.abs(v.values[0] - 2.0)) < 1e-6  # one-sided edge rows


def test_cole_hopf_gaussian():
    xs = np.linspace(-1.0, 1.0, 401)
    u = GridField(xs, [0.0], np.exp(-xs ** 2 / 2.0)[None, :])
    v = cole_hopf(u)
    assert np.max(np.abs(v.values[0][3:-3] - 2.0 * xs[3:-3])) < 1e-9


def test_cole_hopf_constant():
    xs = np.linspace(-1.0, 1.0, 101)
    u = GridField(xs, [0.0], np.full((1, 101), 3.7))
    assert np.max(np.abs(cole_hopf(u).values)) < 1e-12


def test_cole_hopf_rejects_nonpositive():
    xs = np.linspace(-1.0, 1.0, 101)
    u = GridField(xs, [0.0], (xs ** 2 - 0.5)[None, :])
    with pytest.raises(ValueError):
        cole_hopf(u)


# ------------------------------------------------------------------- IVP solver

def test_kink_solution_classical(coeffs_heat):
    kink = BatemanWave(A=1.0, V=0.3, a=1.0, c=0.0, sign="-")
    xs = np.linspace(-4.0, 4.0, 201)
    prob = BurgersProblem(coeffs_heat, kink.initial_profile(), xs,
                          v0_antiderivative=kink.initial_antiderivative())
    assert prob.classical
    sol = solve_burgers_ivp(prob, 0.5)
    ref = np.array([kink(x, 0.5) for x in xs])
    assert np.max(np.abs(sol.values[0] - ref)) / np.max(np.abs(ref)) < 1e-4


def test_kink_solution_scaled_viscosity():
    co = profile("constant-heat", a=0.7)
    kink = BatemanWave(A=0.8, V=0.2, a=0.7, c=0.5, sign="-")
    xs = np.linspace(-4.0, 4.0, 201)
    prob = BurgersProblem(co, kink.initial_profile(), xs)  # numeric V0
    sol = solve_burgers_ivp(prob, 0.5)
    ref = np.array([kink(x, 0.5) for x in xs])
    assert np.max(np.abs(sol.values[0] - ref)) / np.max(np.abs(ref)) < 1e-4


def test_zero_data_stays_zero(coeffs_heat):
    xs = np.linspace(-3.0, 3.0, 101)
    prob = BurgersProblem(coeffs_heat, lambda y: 0.0, xs)
    sol = solve_burgers_ivp(prob, 0.5)
    assert np.max(np.abs(sol.values)) < 1e-10


def test_solver_requires_positive_time(coeffs_heat):
    prob = BurgersProblem(coeffs_heat, lambda y: 0.0, np.linspace(-1, 1, 21))
    with pytest.raises(DomainError):
        solve_burgers_ivp(prob, 0.0)


def test_classical_detection(coeffs_heat, coeffs_fp):
    assert _is_classical(coeffs_heat)
    assert not _is_classical(coeffs_fp)
    forced = BurgersProblem(coeffs_heat, lambda y: 0.0,
                            np.linspace(-1, 1, 21), classical=False)
    assert forced.classical is False


def test_cole_hopf_consistency_general_path(coeffs_fp):
    # same log-values, two differencing routes: -2 d/dx log(u) versus
    # -2 (du/dx)/u applied to u = exp(log-values)
    xs = np.linspace(-1.0, 1.0, 501)
    v0 = lambda y: 0.3 * math.exp(-y * y)
    prob = BurgersProblem(coeffs_fp, v0, xs)
    assert not prob.classical
    logs = log_inner_integral(prob, 0.4)
    route_a = -2.0 * d1_uniform4(logs, xs[1] - xs[0])
    u_field = GridField(xs, [0.4], np.exp(logs)[None, :])
    route_b = cole_hopf(u_field).values[0]
    assert np.max(np.abs(route_a - route_b)) < 1e-8


def test_inner_integral_matches_kernel_solve(coeffs_fp):
    # the linearized field equals the kernel quadrature of exp(-V0/2)
    xs = np.linspace(-1.0, 1.0, 9)
    v0 = lambda y: 0.3 * math.exp(-y * y)
    prob = BurgersProblem(coeffs_fp, v0, xs)
    logs = log_inner_integral(prob, 0.4)
    V0 = prob.antiderivative(20.0)
    u0 = InitialData.from_callable(lambda y: math.exp(-0.5 * V0(y)), L=18.0)
    ref = solve_ivp(prob.kernel(), u0, xs, 0.4)
    assert np.max(np.abs(np.exp(logs) - ref.values[0])
                  / np.abs(ref.values[0])) < 1e-9


def test_full_cole_hopf_consistency(coeffs_fp):
    # solve_burgers_ivp against cole_hopf(solve_ivp(exp(-V0/2)))
    xs = np.linspace(-1.0, 1.0, 501)
    v0 = lambda y: 0.3 * math.exp(-y * y)
    prob = BurgersProblem(coeffs_fp, v0, xs)
    sol = solve_burgers_ivp(prob, 0.4)
    V0 = prob.antiderivative(20.0)
    u0 = InitialData.from_callable(lambda y: math.exp(-0.5 * V0(y)), L=18.0)
    u = solve_ivp(prob.kernel(), u0, xs, 0.4)
    via_u = cole_hopf(u)
    assert np.max(np.abs(sol.values - via_u.values)) < 1e-8


# --------------------------------------------------------------------- residual

def _three_levels(wave, xs, t, dt):
    ts = np.array([t - dt, t, t + dt])
    vals = np.array([[wave(x, s) for x in xs] for s in ts])
    return GridField(xs, ts, vals)


def test_residual_bateman_kink(coeffs_heat):
    kink = BatemanWave(A=1.0, V=0.3, a=1.0, c=0.0, sign="-")
    field = _three_levels(kink, np.linspace(-4.0, 4.0, 321), 0.5, 1e-3)
    res = burgers_residual(field, coeffs_heat)
    scale = field.max_abs
    assert np.max(np.abs(res.values[0][4:-4])) < 1e-6 * scale


def test_residual_bateman_tan(coeffs_heat):
    tanw = BatemanWave(A=1.0, V=0.2, a=1.0, c=0.0, sign="+")
    field = _three_levels(tanw, np.linspace(-1.2, 1.2, 241), 0.5, 1e-3)
    res = burgers_residual(field, coeffs_heat)
    scale = field.max_abs
    assert np.max(np.abs(res.values[0][4:-4])) < 1e-6 * scale


def test_residual_zero_solution():
    co = profile("custom", T=1.0, poly={"a": [1.0], "c": [0.5], "g": [0.2]})
    xs = np.linspace(-2.0, 2.0, 41)
    field = GridField(xs, [0.1, 0.2, 0.3], np.zeros((3, 41)))
    res = burgers_residual(field, co)
    assert res.max_abs == 0.0


def test_residual_needs_three_levels(coeffs_heat):
    xs = np.linspace(-1.0, 1.0, 41)
    field = GridField(xs, [0.1], np.zeros((1, 41)))
    with pytest.raises(ValueError):
        burgers_residual(field, coeffs_heat)


# -------------------------------------------------------------- traveling waves

def test_separable_profile_reproduced():
    spec = TravelingWaveSpec(c0=1.0, c1=-1.0, c2=0.0, c3=0.0, c4=0.0,
                             beta0_init=1.0, gamma0_init=0.0,
                             z_window=(0.0, 3.0), F0=1.0)
    tw = traveling_wave(spec, a=lambda t: 1.0, c=lambda t: 0.0, T=1.0)
    z0 = 2.0  # F0 = -2/(z_left - z0)
    for z in np.linspace(0.0, 1.8, 10):
        assert tw.profile(z) == pytest.approx(-2.0 / (z - z0), abs=1e-10)
    assert len(tw.poles) == 1
    assert tw.poles[0] == pytest.approx(z0, abs=1e-9)


def test_logistic_profile_linear_vs_direct_route():
    spec = TravelingWaveSpec(c0=1.0, c1=0.0, c2=0.0, c3=0.0, c4=0.0,
                             beta0_init=1.0, gamma0_init=0.0,
                             z_window=(-2.0, 4.0), F0=-0.5)
    tw = traveling_wave(spec, a=lambda t: 1.0, c=lambda t: 0.0, T=1.0)
    direct = integrate_profile_direct(spec)
    for z in np.linspace(-2.0, 3.5, 12):
        assert tw.profile(z) == pytest.approx(direct(z), abs=1e-10)
    assert tw.poles == []


def test_growing_profile_pole_location():
    # F' = F + F^2/2 from F(-2) = 0.5 blows up at z = -2 + ln 5
    spec = TravelingWaveSpec(c0=1.0, c1=0.0, c2=0.0, c3=0.0, c4=0.0,
                             beta0_init=1.0, gamma0_init=0.0,
                             z_window=(-2.0, 1.0), F0=0.5)
    tw = traveling_wave(spec, a=lambda t: 1.0, c=lambda t: 0.0, T=1.0)
    assert len(tw.poles) == 1
    assert tw.poles[0] == pytest.approx(-2.0 + math.log(5.0), abs=1e-8)
    with pytest.raises(SingularityError):
        tw.profile(tw.poles[0])
    with pytest.raises(DomainError):
        tw.profile(5.0)


def test_frame_functions_analytic():
    # c = 0.1 gives beta = e^{0.1 t}; gamma' = c0 a beta^2 integrates to
    # gamma(0) + c0 (e^{0.2 t} - 1)/0.2
    spec = TravelingWaveSpec(c0=0.4, c1=0.0, c2=0.0, c3=0.0, c4=0.0,
                             beta0_init=1.0, gamma0_init=0.3,
                             z_window=(-2.0, 2.0), F0=-0.5)
    tw = traveling_wave(spec, a=lambda t: 1.0, c=lambda t: 0.1, T=1.0)
    for t in (0.25, 0.5, 1.0):
        assert tw.beta(t) == pytest.approx(math.exp(0.1 * t), rel=1e-10)
        want = 0.3 + 0.4 * (math.exp(0.2 * t) - 1.0) / 0.2
        assert tw.gamma(t) == pytest.approx(want, rel=1e-10)


def test_traveling_wave_residual_with_induced_coefficients():
    spec = TravelingWaveSpec(c0=0.3, c1=0.2, c2=0.1, c3=-0.2, c4=0.1,
                             beta0_init=1.0, gamma0_init=0.0,
                             z_window=(-2.0, 1.0), F0=-0.3)
    tw = traveling_wave(spec, a=lambda t: 1.0, c=lambda t: 0.1, T=1.0)
    co = tw.induced_coefficients()
    xs = np.linspace(-1.6, 0.2, 301)
    field = _three_levels(tw, xs, 0.3, 1e-3)
    res = burgers_residual(field, co)
    scale = field.max_abs
    assert np.max(np.abs(res.values[0][5:-5])) < 1e-6 * scale


def test_induced_coefficient_formulas():
    spec = TravelingWaveSpec(c0=0.3, c1=0.2, c2=0.1, c3=-0.2, c4=0.1,
                             beta0_init=1.0, gamma0_init=0.0,
                             z_window=(-2.0, 1.0), F0=-0.3)
    a = lambda t: 1.0 + 0.1 * t
    tw = traveling_wave(spec, a, c=lambda t: 0.1, T=1.0)
    t = 0.6
    b, g = tw.beta(t), tw.gamma(t)
    assert tw.induced_g(t) == pytest.approx(0.2 * a(t) * b)
    assert tw.induced_b(t) == pytest.approx(-0.05 * a(t) * b ** 4)
    assert tw.induced_f(t) == pytest.approx(0.5 * a(t) * b ** 3
                                            * (0.2 * g - 0.2))


def test_traveling_wave_spec_validation():
    with pytest.raises(ValueError):
        TravelingWaveSpec(c0=1.0, c1=0.0, c2=0.0, c3=0.0, c4=0.0,
                          beta0_init=0.0, gamma0_init=0.0,
                          z_window=(0.0, 1.0), F0=1.0)
    with pytest.raises(ValueError):
        TravelingWaveSpec(c0=1.0, c1=0.0, c2=0.0, c3=0.0, c4=0.0,
                          beta0_init=1.0, gamma0_init=0.0,
                          z_window=(1.0, 0.0), F0=1.0)


# ---------------------------------------------------------------- Bateman waves

def test_bateman_kink_far_field_limits():
    kink = BatemanWave(A=1.0, V=0.3, a=1.0, c=0.0, sign="-")
    assert kink(-40.0, 0.0) == pytest.approx(1.0 - 0.3, abs=1e-12)
    assert kink(40.0, 0.0) == pytest.approx(-1.0 - 0.3, abs=1e-12)
    assert abs(kink(500.0, 0.0)) < 2.0  # tanh form cannot overflow


def test_bateman_tan_pole_guard():
    tanw = BatemanWave(A=1.0, V=0.0, a=1.0, c=0.0, sign="+")
    x_pole = math.pi  # theta = x/2 hits pi/2 at x = pi
    with pytest.raises(SingularityError):
        tanw(x_pole, 0.0)
    assert math.isfinite(tanw(x_pole - 0.1, 0.0))


def test_bateman_sharpens_as_viscosity_vanishes():
    errs = []
    for a in (0.1, 0.05):
        kink = BatemanWave(A=1.0, V=0.3, a=a, c=0.0, sign="-")
        errs.append(abs(kink(0.1, 0.0) - (-1.0 - 0.3)))
    assert errs[1] < errs[0]


def test_bateman_kink_travels_at_minus_V():
    kink = BatemanWave(A=1.0, V=0.4, a=1.0, c=0.0, sign="-")
    xs = np.linspace(-8.0, 8.0, 801)
    dx = xs[1] - xs[0]
    v0 = np.array([kink(x, 0.0) for x in xs])
    v1 = np.array([kink(x, 1.0) for x in xs])
    shifts = np.arange(-60, 61)
    scores = [np.sum(np.abs(np.roll(v0, s)[80:-80] - v1[80:-80]))
              for s in shifts]
    best = shifts[int(np.argmin(scores))] * dx
    assert best == pytest.approx(-0.4, abs=dx)


def test_bateman_antiderivative_matches_quadrature():
    kink = BatemanWave(A=0.8, V=0.2, a=0.7, c=0.5, sign="-")
    V0 = kink.initial_antiderivative()
    for y in (-3.0, -0.5, 1.0, 4.0):
        want = quad(lambda z: kink(z, 0.0), 0.0, y, epsabs=1e-12,
                    epsrel=1e-12)[0]
        assert V0(y) == pytest.approx(want, abs=1e-10)


def test_bateman_validation():
    with pytest.raises(ValueError):
        BatemanWave(A=-1.0, V=0.0, a=1.0, c=0.0, sign="-")
    with pytest.raises(ValueError):
        BatemanWave(A=1.0, V=0.0, a=0.0, c=0.0, sign="-")
    with pytest.raises(ValueError):
        BatemanWave(A=1.0, V=0.0, a=1.0, c=0.0, sign="x")
    with pytest.raises(ValueError):
        BatemanWave(A=1.0, V=0.0, a=1.0, c=0.0, sign="+").initial_antiderivative()


def test_antiderivative_domain_guard(coeffs_heat):
    prob = BurgersProblem(coeffs_heat, lambda y: math.sin(y),
                          np.linspace(-1.0, 1.0, 21))
    V0 = prob.antiderivative(5.0)
    assert V0(2.0) == pytest.approx(1.0 - math.cos(2.0), abs=1e-10)
    with pytest.raises(DomainError):
        V0(6.0)
