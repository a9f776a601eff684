import math

import numpy as np
import pytest

from heatkern import profile, solve_characteristic, wronskian_residual
from heatkern.errors import DomainError

TS = np.linspace(0.04, 2.0, 50)


def _analytic(name):
    """Closed-form standard solutions, worked out by hand per profile."""
    if name == "heat":          # mu'' = 0
        return profile("constant-heat", a=1.0), 2.0 * TS, np.ones_like(TS), \
            np.ones_like(TS)
    if name == "fp":            # mu'' + 2 mu' = 0
        return profile("fokker-planck"), 1.0 - np.exp(-2.0 * TS), \
            np.ones_like(TS), np.exp(-TS)
    if name == "cable":         # double root at -2/tau = -1 (lam=1, tau=2)
        co = profile("cable", lam=1.0, tau=2.0)
        return co, TS * np.exp(-TS), (1.0 + TS) * np.exp(-TS), np.exp(-TS)
    if name == "ou":            # mu'' + 2k mu' = 0, k = 1
        co = profile("ou-drift", a=1.0, k=1.0, g=0.5)
        return co, 1.0 - np.exp(-2.0 * TS), np.ones_like(TS), np.exp(-TS)
    raise KeyError(name)


@pytest.mark.parametrize("name", ["heat", "fp", "cable", "ou"])
def test_standard_solutions_match_analytic(name):
    co, mu0_ref, mu1_ref, h_ref = _analytic(name)
    chs = solve_characteristic(co, T=2.0, tol=1e-11)
    assert np.max(np.abs(chs.mu0(TS) - mu0_ref) / np.abs(mu0_ref)) < 1e-8
    assert np.max(np.abs(chs.mu1(TS) - mu1_ref) / np.abs(mu1_ref)) < 1e-8
    assert np.max(np.abs(chs.h(TS) - h_ref) / h_ref) < 1e-8


@pytest.mark.parametrize("name", ["heat", "fp", "cable", "ou"])
def test_initial_data(name):
    co = _analytic(name)[0]
    chs = solve_characteristic(co, T=2.0, tol=1e-11)
    a0 = co.a(0.0)
    assert abs(chs.mu0(0.0)) <= 1e-12
    assert abs(chs.dmu0(0.0) - 2.0 * a0) <= 1e-12
    assert abs(chs.mu1(0.0) - 1.0) <= 1e-12
    assert abs(chs.dmu1(0.0)) <= 1e-12
    assert abs(chs.h(0.0) - 1.0) <= 1e-12


def test_h_positive_everywhere():
    chs = solve_characteristic(profile("fokker-planck"), T=2.0, tol=1e-10)
    assert np.all(chs.h(np.linspace(0.0, 2.0, 200)) > 0.0)


def test_specific_values_fokker_planck():
    chs = solve_characteristic(profile("fokker-planck"), T=2.0, tol=1e-11)
    assert chs.mu0(1.0) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-9)
    assert chs.h(1.0) == pytest.approx(math.exp(-1.0), rel=1e-9)


def test_wronskian_residual_heat_machine_precision():
    co = profile("constant-heat", a=1.0)
    chs = solve_characteristic(co, T=1.0, tol=1e-10)
    assert wronskian_residual(chs, co, [0.25, 0.5, 1.0]) < 1e-12


def test_wronskian_residual_fokker_planck():
    # analytic W(t) = -2 e^{-2t}
    co = profile("fokker-planck")
    chs = solve_characteristic(co, T=2.0, tol=1e-10)
    assert wronskian_residual(chs, co, [0.5, 1.0, 2.0]) < 1e-6


@pytest.mark.parametrize("name", ["heat", "fp", "cable", "ou"])
def test_wronskian_residual_all_profiles(name):
    co = _analytic(name)[0]
    chs = solve_characteristic(co, T=2.0, tol=1e-10)
    assert wronskian_residual(chs, co, np.linspace(0.1, 2.0, 12)) < 1e-6


def test_wronskian_grid_outside_domain():
    co = profile("constant-heat", a=1.0)
    chs = solve_characteristic(co, T=1.0, tol=1e-10)
    with pytest.raises(DomainError):
        wronskian_residual(chs, co, [1.5])


def test_first_zero_of_mu0_oscillatory():
    # b = -1 gives sigma = -1, so mu'' + 4 mu = 0 and mu0 = sin(2t): zero at pi/2
    co = profile("custom", T=2.0, poly={"a": [1.0], "b": [-1.0]})
    chs = solve_characteristic(co, T=2.0, tol=1e-11)
    assert chs.first_zero_of_mu0 == pytest.approx(math.pi / 2.0, abs=1e-9)
    assert chs.T_valid == pytest.approx(math.pi / 2.0, abs=1e-9)


@pytest.mark.parametrize("name", ["heat", "fp", "cable", "ou"])
def test_no_spurious_zero_on_builtins(name):
    co = _analytic(name)[0]
    chs = solve_characteristic(co, T=2.0, tol=1e-10)
    assert chs.first_zero_of_mu0 is None
    assert chs.T_valid == 2.0


def test_halving_tol_never_increases_error():
    co = profile("fokker-planck")
    ana = 1.0 - np.exp(-2.0 * TS)
    errors = []
    tol = 1e-5
    while tol > 0.9e-9:
        chs = solve_characteristic(co, T=2.0, tol=tol)
        errors.append(float(np.max(np.abs(chs.mu0(TS) - ana))))
        tol /= 2.0
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= coarse * 1.1
    assert errors[-1] < errors[0]


def test_dense_output_vectorized_and_bounded():
    chs = solve_characteristic(profile("fokker-planck"), T=2.0, tol=1e-10)
    vals = chs.mu0(np.array([0.1, 0.5, 1.5]))
    assert vals.shape == (3,)
    with pytest.raises(DomainError):
        chs.mu0(2.5)
    with pytest.raises(DomainError):
        chs.mu0(-0.5)


def test_horizon_validation():
    co = profile("constant-heat", a=1.0, T=1.0)
    with pytest.raises(DomainError):
        solve_characteristic(co, T=3.0)
    with pytest.raises(ValueError):
        solve_characteristic(co, T=1.0, tol=-1.0)
