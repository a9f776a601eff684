"""The seven-function quadratic-exponent ODE system and its fundamental solution.

The Gaussian-form particular solutions of the master equation are governed by
the coupled system

    mu'    = -2 mu (2 a alpha + d)
    alpha' = -b + 2 c alpha + 4 a alpha^2          (Riccati)
    beta'  = (c + 4 a alpha) beta
    gamma' = a beta^2
    delta' = (c + 4 a alpha) delta + f - 2 alpha g
    eps'   = (2 a delta - g) beta
    kappa' = a delta^2 - g delta

This module builds the distinguished solution (alpha0 ... kappa0) expressed
through the standard solutions of the characteristic equation, applies the
nonlinear superposition principle that produces the general solution from
arbitrary initial data, inverts that map, integrates the system directly as
an independent cross-check, and provides the small-time expansions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad, solve_ivp

from .characteristic import CharacteristicSolution
from .coefficients import CoefficientSet
from .errors import BlowUpError, DomainError, IntegrationError, SingularityError

BLOWUP_THRESHOLD = 1e12
SUPERPOSE_SINGULAR_ATOL = 1e-14


class FundamentalValues(NamedTuple):
    """The distinguished solution sampled at one time."""

    mu0: float
    alpha0: float
    beta0: float
    gamma0: float
    delta0: float
    eps0: float
    kappa0: float


class RiccatiAsymptotics(NamedTuple):
    """Truncated small-time expansions of the fundamental coefficients."""

    alpha0: float
    beta0: float
    gamma0: float
    delta0: float
    eps0: float
    kappa0: float


@dataclass
class RiccatiState:
    """A full seven-tuple at time ``t`` together with its initial data."""

    t: float
    mu: float
    alpha: float
    beta: float
    gamma: float
    delta: float
    eps: float
    kappa: float
    init: tuple

    def as_array(self):
        return np.array([self.mu, self.alpha, self.beta, self.gamma,
                         self.delta, self.eps, self.kappa])


class FundamentalRiccati:
    """Dense evaluators for alpha0 ... kappa0 on (0, T_valid].

    alpha0, beta0, gamma0 are algebraic in the characteristic solution;
    delta0 comes from its regular quadrature (carried as an augmented ODE
    state), and eps0, kappa0 from their defining ODEs seeded with the
    limiting initial data eps0(0) = -g(0)/(2a(0)), kappa0(0) = 0.  All three
    diverge like 1/t at the origin except delta0/eps0/kappa0, so evaluation
    at t = 0 (or past the first zero of mu0) is a domain error.
    """

    def __init__(self, chs: CharacteristicSolution, coeffs: CoefficientSet,
                 tol: float, aug_sol, t_max: float):
        self.chs = chs
        self.coeffs = coeffs
        self.tol = tol
        self._aug = aug_sol
        self._t_max = t_max

    @property
    def T_valid(self) -> float:
        return self.chs.T_valid

    def _check(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr <= 0.0):
            raise DomainError("fundamental coefficients diverge at t = 0")
        if np.any(t_arr > self._t_max * (1.0 + 1e-12)):
            raise DomainError(f"t beyond the validity interval (0, {self._t_max:.6g}]")
        return t_arr

    def _scalarize(self, t, value):
        return float(value) if np.asarray(t).ndim == 0 else value

    def _coeff(self, fn, t_arr):
        if t_arr.ndim == 0:
            return fn(float(t_arr))
        return np.array([fn(ti) for ti in t_arr])

    def mu0(self, t):
        self._check(t)
        return self.chs.mu0(t)

    def alpha0(self, t):
        t_arr = self._check(t)
        a = self._coeff(self.coeffs.a, t_arr)
        d = self._coeff(self.coeffs.d, t_arr)
        val = -self.chs.dmu0(t) / (4.0 * a * self.chs.mu0(t)) - d / (2.0 * a)
        return self._scalarize(t, val)

    def beta0(self, t):
        self._check(t)
        return self._scalarize(t, self.chs.h(t) / self.chs.mu0(t))

    def gamma0(self, t):
        self._check(t)
        d0 = self.coeffs.d(0.0)
        a0 = self.coeffs.a(0.0)
        val = d0 / (2.0 * a0) - self.chs.mu1(t) / (2.0 * self.chs.mu0(t))
        return self._scalarize(t, val)

    def delta0(self, t):
        self._check(t)
        i5 = self._aug(np.asarray(t, dtype=float))[0]
        return self._scalarize(t, self.chs.h(t) * i5 / self.chs.mu0(t))

    def eps0(self, t):
        self._check(t)
        return self._scalarize(t, self._aug(np.asarray(t, dtype=float))[1])

    def kappa0(self, t):
        self._check(t)
        return self._scalarize(t, self._aug(np.asarray(t, dtype=float))[2])

    def values(self, t: float) -> FundamentalValues:
        return FundamentalValues(self.mu0(t), self.alpha0(t), self.beta0(t),
                                 self.gamma0(t), self.delta0(t), self.eps0(t),
                                 self.kappa0(t))


def _source_integrand(chs, coeffs):
    """Integrand of the delta0 quadrature; finite on [0, T] (value g(0) at 0)."""

    def integrand(s):
        a = coeffs.a(s)
        return ((coeffs.f(s) + coeffs.d(s) / a * coeffs.g(s)) * chs.mu0(s)
                + coeffs.g(s) / (2.0 * a) * chs.dmu0(s)) / chs.h(s)

    return integrand


def fundamental(chs: CharacteristicSolution, coeffs: CoefficientSet,
                tol: float = 1e-10) -> FundamentalRiccati:
    """Assemble the fundamental solution of the seven-function system.

    The inhomogeneous states (the delta0 quadrature plus eps0 and kappa0) are
    integrated as one augmented system with local error ``tol``, sharing the
    dense characteristic solution.  Their right-hand sides have removable
    0/0 limits at t = 0; the single evaluation the integrator makes exactly
    at the origin uses the analytically known limits, with the eps0 slope
    obtained by small-time extrapolation (its closed form would need g'(0),
    which the coefficient set does not carry).
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    a0 = coeffs.a(0.0)
    g0 = coeffs.g(0.0)
    delta_limit = g0 / (2.0 * a0)

    src = _source_integrand(chs, coeffs)

    def eps_slope(t):
        i5 = quad(src, 0.0, t, epsabs=1e-14, epsrel=1e-12)[0]
        mu0 = chs.mu0(t)
        h = chs.h(t)
        return (2.0 * coeffs.a(t) * h * i5 - coeffs.g(t) * mu0) * h / mu0 ** 2

    t1 = min(1e-5, chs.T * 1e-3)
    eps_slope0 = 2.0 * eps_slope(t1 / 2.0) - eps_slope(t1)

    kappa_slope0 = a0 * delta_limit ** 2 - g0 * delta_limit

    def rhs(t, z):
        if t == 0.0:
            return np.array([g0, eps_slope0, kappa_slope0])
        mu0 = chs.mu0(t)
        h = chs.h(t)
        a = coeffs.a(t)
        g = coeffs.g(t)
        delta0 = h * z[0] / mu0
        beta0 = h / mu0
        return np.array([
            src(t),
            (2.0 * a * delta0 - g) * beta0,
            a * delta0 ** 2 - g * delta0,
        ])

    t_end = chs.T
    if chs.first_zero_of_mu0 is not None:
        t_end = min(t_end, chs.first_zero_of_mu0 * (1.0 - 1e-6))

    z0 = np.array([0.0, -delta_limit, 0.0])
    sol = solve_ivp(rhs, (0.0, t_end), z0, method="DOP853", dense_output=True,
                    rtol=tol, atol=tol * 1e-3)
    if not sol.success:
        raise IntegrationError(f"fundamental-solution integration failed: {sol.message}")

    return FundamentalRiccati(chs, coeffs, tol, sol.sol, t_end)


def superpose(fund: FundamentalRiccati, init, t: float) -> RiccatiState:
    """General solution at time ``t`` from arbitrary initial data.

    ``init`` is the seven-tuple (mu, alpha, beta, gamma, delta, eps, kappa)
    at t = 0.  Raises :class:`SingularityError` when alpha(0) + gamma0(t)
    vanishes (within 1e-14), where the superposition formulas break down.
    """
    mu_i, alpha_i, beta_i, gamma_i, delta_i, eps_i, kappa_i = (float(v) for v in init)
    denom = alpha_i + fund.gamma0(t)
    if abs(denom) <= SUPERPOSE_SINGULAR_ATOL:
        raise SingularityError(f"alpha(0) + gamma0({t}) = {denom:.3e} is singular")
    b0 = fund.beta0(t)
    d0 = fund.delta0(t)
    e0 = fund.eps0(t)
    shift = delta_i + e0
    return RiccatiState(
        t=float(t),
        mu=-2.0 * mu_i * fund.mu0(t) * denom,
        alpha=fund.alpha0(t) - b0 ** 2 / (4.0 * denom),
        beta=-beta_i * b0 / (2.0 * denom),
        gamma=gamma_i - beta_i ** 2 / (4.0 * denom),
        delta=d0 - b0 * shift / (2.0 * denom),
        eps=eps_i - beta_i * shift / (2.0 * denom),
        kappa=kappa_i + fund.kappa0(t) - shift ** 2 / (4.0 * denom),
        init=tuple(float(v) for v in init),
    )


class RiccatiTrajectory:
    """Dense directly-integrated trajectory of the seven-function system."""

    def __init__(self, init, T, dense):
        self.init = tuple(float(v) for v in init)
        self.T = float(T)
        self._dense = dense

    def state(self, t: float) -> RiccatiState:
        t = float(t)
        if t < 0.0 or t > self.T * (1.0 + 1e-12):
            raise DomainError(f"t={t} outside [0, {self.T}]")
        y = self._dense(min(t, self.T))
        return RiccatiState(t, *map(float, y), init=self.init)

    @property
    def final(self) -> RiccatiState:
        return self.state(self.T)


def integrate_direct(coeffs: CoefficientSet, init, T: float,
                     tol: float = 1e-10) -> RiccatiTrajectory:
    """Integrate the seven coupled ODEs directly from ``init`` up to ``T``.

    Solutions of the Riccati component can blow up in finite time; any
    component magnitude exceeding 1e12 aborts the run with a
    :class:`BlowUpError` carrying the reached time.
    """
    init = np.array([float(v) for v in init], dtype=float)
    if init.shape != (7,):
        raise ValueError("init must contain the seven values "
                         "(mu, alpha, beta, gamma, delta, eps, kappa)")
    if not np.all(np.isfinite(init)):
        raise ValueError("init must be finite")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    def rhs(t, y):
        mu, alpha, beta, gamma, delta, eps, kappa = y
        a = coeffs.a(t)
        b = coeffs.b(t)
        c = coeffs.c(t)
        d = coeffs.d(t)
        f = coeffs.f(t)
        g = coeffs.g(t)
        lin = c + 4.0 * a * alpha
        return np.array([
            -2.0 * mu * (2.0 * a * alpha + d),
            -b + 2.0 * c * alpha + 4.0 * a * alpha ** 2,
            lin * beta,
            a * beta ** 2,
            lin * delta + f - 2.0 * alpha * g,
            (2.0 * a * delta - g) * beta,
            a * delta ** 2 - g * delta,
        ])

    def escape(t, y):
        return float(np.max(np.abs(y))) - BLOWUP_THRESHOLD

    escape.terminal = True
    escape.direction = 1.0

    sol = solve_ivp(rhs, (0.0, float(T)), init, method="DOP853",
                    dense_output=True, rtol=tol, atol=tol * 1e-3,
                    events=escape)
    if sol.status == 1:
        raise BlowUpError(f"trajectory escaped |y| > {BLOWUP_THRESHOLD:g} "
                          f"at t = {sol.t_events[0][0]:.6g}", sol.t_events[0][0])
    if not sol.success:
        raise IntegrationError(f"direct integration failed: {sol.message}")
    return RiccatiTrajectory(init, T, sol.sol)


def invert(state: RiccatiState) -> FundamentalValues:
    """Recover the fundamental-solution values from a general solution.

    Requires gamma(t) != gamma(0), beta(0) != 0 and mu(0) != 0; applying
    this to the output of :func:`superpose` reproduces the fundamental
    values used there (an exact algebraic roundtrip).
    """
    mu_i, alpha_i, beta_i, gamma_i, delta_i, eps_i, kappa_i = state.init
    dgamma = state.gamma - gamma_i
    if dgamma == 0.0:
        raise SingularityError("gamma(t) = gamma(0); inverse map undefined")
    if beta_i == 0.0 or mu_i == 0.0:
        raise SingularityError("inverse map requires beta(0) != 0 and mu(0) != 0")
    deps = state.eps - eps_i
    return FundamentalValues(
        mu0=2.0 * state.mu * dgamma / (mu_i * beta_i ** 2),
        alpha0=state.alpha - state.beta ** 2 / (4.0 * dgamma),
        beta0=beta_i * state.beta / (2.0 * dgamma),
        gamma0=-alpha_i - beta_i ** 2 / (4.0 * dgamma),
        delta0=state.delta - state.beta * deps / (2.0 * dgamma),
        eps0=-delta_i + beta_i * deps / (2.0 * dgamma),
        kappa0=state.kappa - kappa_i - deps ** 2 / (4.0 * dgamma),
    )


def asymptotics(coeffs: CoefficientSet, t: float) -> RiccatiAsymptotics:
    """Truncated t -> 0+ expansions (constant terms kept, O(t) dropped).

    Intended for small t (<= 1e-2); the caller is responsible for the range.
    """
    t = float(t)
    a0 = coeffs.a(0.0)
    c0 = coeffs.c(0.0)
    g0 = coeffs.g(0.0)
    da0 = coeffs.da(0.0)
    curv = da0 / (8.0 * a0 ** 2)
    return RiccatiAsymptotics(
        alpha0=-1.0 / (4.0 * a0 * t) - c0 / (4.0 * a0) + curv,
        beta0=1.0 / (2.0 * a0 * t) - da0 / (4.0 * a0 ** 2),
        gamma0=-1.0 / (4.0 * a0 * t) + c0 / (4.0 * a0) + curv,
        delta0=g0 / (2.0 * a0),
        eps0=-g0 / (2.0 * a0),
        kappa0=0.0,
    )


def gamma0_quadrature_form(fund: FundamentalRiccati, coeffs: CoefficientSet,
                           t: float, quad_tol: float = 1e-11) -> float:
    """gamma0 via its quadrature representation (divides by mu0').

    gamma0 = d(0)/(2a(0)) - a h^2/(mu0 mu0') - 4 int_0^t a sigma h^2/(mu0')^2,
    which follows from differentiating the boundary term:
    d/dt[-a h^2/(mu0 mu0')] = a h^2/mu0^2 + 4 a sigma h^2/(mu0')^2.
    Valid only where mu0' does not vanish on (0, t]; retained as an
    independent cross-check of the mu1-based evaluation.
    """
    from .coefficients import tau_sigma

    chs = fund.chs

    def integrand(s):
        a = coeffs.a(s)
        sigma = tau_sigma(coeffs, s)[1]
        return a * sigma * chs.h(s) ** 2 / chs.dmu0(s) ** 2

    val, err = quad(integrand, 0.0, t, epsabs=quad_tol, epsrel=quad_tol, limit=4096)
    a0 = coeffs.a(0.0)
    d0 = coeffs.d(0.0)
    a_t = coeffs.a(t)
    return (d0 / (2.0 * a0)
            - a_t * chs.h(t) ** 2 / (chs.mu0(t) * chs.dmu0(t))
            - 4.0 * val)
