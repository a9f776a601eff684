import math

import numpy as np
import pytest

from heatkern import (BatemanWave, FDSpec, InitialData, closed_form,
                      fd_burgers, fd_diffusion, profile, solve_ivp)
from heatkern.errors import StabilityError
from heatkern.oracle import _check_bounded


def test_fdspec_validation():
    with pytest.raises(ValueError):
        FDSpec(L=8.0, n=8, dt=1e-3)
    with pytest.raises(ValueError):
        FDSpec(L=8.0, n=64, dt=0.0)
    with pytest.raises(ValueError):
        FDSpec(L=-1.0, n=64, dt=1e-3)
    spec = FDSpec(L=4.0, n=17, dt=1e-3)
    assert spec.dx == pytest.approx(0.5)
    assert len(spec.xs) == 17


def test_fd_diffusion_heat_vs_analytic(coeffs_heat):
    spec = FDSpec(L=8.0, n=801, dt=1e-4)
    out = fd_diffusion(coeffs_heat, lambda x: math.exp(-x * x), spec, 0.25)
    want = np.exp(-out.xs ** 2 / 2.0) / math.sqrt(2.0)
    assert np.max(np.abs(out.values[1] - want)) < 1e-4


def test_fd_diffusion_kernel_row_composes(coeffs_fp):
    # evolving K(., y0, 0.1) for 0.5 time units lands on K(., y0, 0.6)
    K = closed_form("fokker-planck")
    y0 = 0.4
    spec = FDSpec(L=8.0, n=801, dt=2e-4)
    out = fd_diffusion(coeffs_fp, lambda x: K.evaluate(x, y0, 0.1), spec, 0.5)
    want = K.evaluate(out.xs, y0, 0.6)
    assert np.max(np.abs(out.values[1] - want)) < 1e-3


def test_fd_diffusion_richardson_order_two(coeffs_fp, kernel_fp):
    phi = InitialData.gaussian()
    errors = []
    for n, dt in ((201, 8e-4), (401, 4e-4)):
        fd = fd_diffusion(coeffs_fp, lambda x: math.exp(-x * x),
                          FDSpec(L=8.0, n=n, dt=dt), 0.25)
        stride = (n - 1) // 100
        xs = fd.xs[::stride]
        ref = solve_ivp(kernel_fp, phi, xs, 0.25)
        errors.append(float(np.max(np.abs(fd.values[1][::stride]
                                          - ref.values[0]))))
    assert 3.0 < errors[0] / errors[1] < 5.0


def test_fd_diffusion_mass_conservation(coeffs_heat):
    spec = FDSpec(L=10.0, n=401, dt=5e-4)
    out = fd_diffusion(coeffs_heat, lambda x: math.exp(-x * x), spec, 0.5)
    m0 = float(np.sum(out.values[0])) * spec.dx
    m1 = float(np.sum(out.values[1])) * spec.dx
    assert abs(m1 - m0) < 1e-8 * 0.5


def test_fd_diffusion_warns_on_undecayed_data(coeffs_heat):
    spec = FDSpec(L=2.0, n=64, dt=1e-3)
    with pytest.warns(UserWarning, match="window edges"):
        fd_diffusion(coeffs_heat, lambda x: math.exp(-x * x), spec, 0.1)


def test_fd_burgers_kink(coeffs_heat):
    kink = BatemanWave(A=1.0, V=0.3, a=1.0, c=0.0, sign="-")
    spec = FDSpec(L=8.0, n=1601, dt=2e-3)
    out = fd_burgers(coeffs_heat, kink.initial_profile(), spec, 0.5)
    want = np.array([kink(x, 0.5) for x in out.xs])
    assert np.max(np.abs(out.values[1] - want)) < 1e-3


def test_fd_burgers_constant_state_exact(coeffs_heat):
    spec = FDSpec(L=8.0, n=101, dt=1e-3)
    out = fd_burgers(coeffs_heat, lambda x: 0.7, spec, 0.5)
    assert np.max(np.abs(out.values[1] - 0.7)) < 1e-10


def test_fd_burgers_cfl_enforced(coeffs_heat):
    kink = BatemanWave(A=1.0, V=0.0, a=1.0, c=0.0, sign="-")
    spec = FDSpec(L=8.0, n=1601, dt=0.1)  # |v| dt/dx = 1*0.1/0.01 = 10
    with pytest.raises(StabilityError, match="CFL"):
        fd_burgers(coeffs_heat, kink.initial_profile(), spec, 0.5)


def test_bounded_check_guards():
    with pytest.raises(StabilityError):
        _check_bounded(np.array([1.0, np.nan]), False, 0.1)
    with pytest.raises(StabilityError):
        _check_bounded(np.array([1e9, 0.0]), True, 0.1)
    _check_bounded(np.array([1e9, 0.0]), False, 0.1)  # growth terms present
    _check_bounded(np.array([1.0, 2.0]), True, 0.1)
