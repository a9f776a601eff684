"""Standard solutions of the linear characteristic equation.

Solves mu'' - tau(t) mu' - 4 sigma(t) mu = 0 for the pair of standard
solutions

    mu0(0) = 0,  mu0'(0) = 2 a(0)        mu1(0) = 1,  mu1'(0) = 0

together with the auxiliary exponential h(t) = exp(int_0^t (c - 2d) ds),
carried as one augmented first-order system with shared error control.
Dense output comes from the integrator's continuous extension, so the
downstream kernel coefficients can be sampled at arbitrary times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .coefficients import CoefficientSet, tau_sigma
from .errors import DomainError, IntegrationError

_ZERO_SCAN_POINTS = 4096


@dataclass
class CharacteristicSolution:
    """Dense standard solutions mu0, mu1 (with derivatives) and h on [0, T].

    ``first_zero_of_mu0`` is the smallest positive zero of mu0 if one exists
    in (0, T]; kernel construction is only valid strictly below it, because
    the coefficient functions of the Gaussian exponent divide by mu0.
    """

    coeffs: CoefficientSet
    T: float
    tol: float
    first_zero_of_mu0: Optional[float]
    mu1_at_0: float
    _sol: object

    def _eval(self, t, row):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < -1e-15) or np.any(t_arr > self.T * (1.0 + 1e-12)):
            raise DomainError(f"t outside [0, {self.T}]")
        out = self._sol(np.clip(t_arr, 0.0, self.T))[row]
        return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out

    def mu0(self, t):
        return self._eval(t, 0)

    def dmu0(self, t):
        return self._eval(t, 1)

    def mu1(self, t):
        return self._eval(t, 2)

    def dmu1(self, t):
        return self._eval(t, 3)

    def h(self, t):
        return self._eval(t, 4)

    @property
    def T_valid(self) -> float:
        return self.T if self.first_zero_of_mu0 is None else self.first_zero_of_mu0


def solve_characteristic(coeffs: CoefficientSet, T: float | None = None,
                         tol: float = 1e-10) -> CharacteristicSolution:
    """Integrate the characteristic system with local error ``tol``.

    Parameters
    ----------
    coeffs:
        Validated coefficient set; a(t) must not vanish on [0, T].
    T:
        Integration horizon, default ``coeffs.domain_end``.
    tol:
        Relative local error tolerance of the adaptive embedded
        Runge–Kutta integrator (DOP853); the absolute tolerance is
        ``1e-3 * tol``.

    Raises
    ------
    IntegrationError
        If the integrator aborts (e.g. step-size underflow).  A zero of mu0
        inside (0, T] is recorded, not raised.
    """
    if T is None:
        T = coeffs.domain_end
    T = float(T)
    if not 0.0 < T <= coeffs.domain_end * (1.0 + 1e-12):
        raise DomainError(f"T={T} outside (0, {coeffs.domain_end}]")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    def rhs(t, y):
        tau, sigma = tau_sigma(coeffs, min(t, coeffs.domain_end))
        cm2d = coeffs.c(t) - 2.0 * coeffs.d(t)
        return np.array([
            y[1],
            tau * y[1] + 4.0 * sigma * y[0],
            y[3],
            tau * y[3] + 4.0 * sigma * y[2],
            cm2d * y[4],
        ])

    a0 = coeffs.a(0.0)
    y0 = np.array([0.0, 2.0 * a0, 1.0, 0.0, 1.0])
    sol = solve_ivp(rhs, (0.0, T), y0, method="DOP853", dense_output=True,
                    rtol=tol, atol=tol * 1e-3)
    if not sol.success:
        raise IntegrationError(f"characteristic integration failed: {sol.message}")

    first_zero = _first_zero(sol.sol, T)
    return CharacteristicSolution(coeffs=coeffs, T=T, tol=tol,
                                  first_zero_of_mu0=first_zero,
                                  mu1_at_0=1.0, _sol=sol.sol)


def _first_zero(dense, T):
    """Smallest t > 0 with mu0(t) = 0, by sign scan plus bisection refinement."""
    ts = np.linspace(0.0, T, _ZERO_SCAN_POINTS + 1)[1:]
    vals = dense(ts)[0]
    signs = np.sign(vals)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0.0)[0]
    exact = np.nonzero(vals == 0.0)[0]
    candidates = []
    if len(flips):
        lo, hi = ts[flips[0]], ts[flips[0] + 1]
        candidates.append(brentq(lambda t: float(dense(t)[0]), lo, hi, xtol=1e-12))
    if len(exact):
        candidates.append(float(ts[exact[0]]))
    return min(candidates) if candidates else None


def wronskian_residual(chs: CharacteristicSolution, coeffs: CoefficientSet,
                       grid) -> float:
    """Max relative drift of the Wronskian identity over ``grid``.

    W(t) = mu0 mu1' - mu1 mu0' must equal W(0) exp(int_0^t tau); using
    exp(int tau) = (a(t)/a(0)) h(t)^2 avoids an extra quadrature.
    """
    a0 = coeffs.a(0.0)
    w0 = -2.0 * a0
    worst = 0.0
    for t in np.atleast_1d(np.asarray(grid, dtype=float)):
        if t <= 0.0 or t > chs.T * (1.0 + 1e-12):
            raise DomainError(f"grid point {t} outside (0, {chs.T}]")
        w = chs.mu0(t) * chs.dmu1(t) - chs.mu1(t) * chs.dmu0(t)
        ref = w0 * (coeffs.a(t) / a0) * chs.h(t) ** 2
        worst = max(worst, abs(w - ref) / abs(ref))
    return worst
