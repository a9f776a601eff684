"""Nonautonomous Burgers-type equation via the Cole–Hopf linearization.

The nonlinear equation

    v_t + a (v v_x - v_xx) + (g - c x) v_x - c v + 2 (f - 2 b x) = 0

linearizes under v = -2 u_x / u into the diffusion-type master equation, so
its Cauchy problem is solved by one kernel quadrature per grid point followed
by a log-derivative.  The classical constant-viscosity equation
v_t + v v_x = a v_xx uses the scaled substitution v = -2a u_x / u and the
correspondingly scaled exponent.  Traveling-wave families are constructed
from the moving-frame reduction, whose profile ODE is integrated through an
equivalent linear second-order equation (poles of the profile appear as
zeros of its solution rather than as blow-up mid-integration).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp as _solve_ivp
from scipy.optimize import brentq

from .coefficients import CoefficientSet
from .errors import DomainError, IntegrationError, QuadratureError, SingularityError
from .kernel import GridField, HeatKernel, QuadSpec, _quad, make_kernel
from ._differences import d1_uniform4, d2_uniform4, dt_central

_POLE_SCAN_POINTS = 2048


def _is_classical(coeffs: CoefficientSet) -> bool:
    """True when b = c = f = g = 0 and a is constant on [0, domain_end]."""
    ts = np.linspace(0.0, coeffs.domain_end, 9)
    a0 = coeffs.a(0.0)
    for t in ts:
        for fn in (coeffs.b, coeffs.c, coeffs.f, coeffs.g):
            if abs(fn(t)) > 1e-14:
                return False
        if abs(coeffs.a(t) - a0) > 1e-12 * max(1.0, abs(a0)):
            return False
    return True


class _DenseAntiderivative:
    """V(y) = int_0^y v(z) dz as a dense two-sided ODE solution."""

    def __init__(self, v: Callable[[float], float], half_width: float,
                 tol: float = 1e-12):
        self.v = v
        self.half_width = 0.0
        self.tol = tol
        self._pos = None
        self._neg = None
        self.extend(half_width)

    def extend(self, half_width: float):
        if half_width <= self.half_width:
            return
        rhs = lambda y, V: [self.v(y)]
        kw = dict(method="DOP853", dense_output=True, rtol=self.tol, atol=1e-14)
        pos = _solve_ivp(rhs, (0.0, half_width), [0.0], **kw)
        neg = _solve_ivp(rhs, (0.0, -half_width), [0.0], **kw)
        if not (pos.success and neg.success):
            raise IntegrationError("antiderivative integration failed")
        self._pos, self._neg = pos.sol, neg.sol
        self.half_width = half_width

    def __call__(self, y: float) -> float:
        if abs(y) > self.half_width * (1.0 + 1e-12):
            raise DomainError(f"antiderivative queried outside ±{self.half_width}")
        y = float(np.clip(y, -self.half_width, self.half_width))
        return float((self._pos if y >= 0.0 else self._neg)(y)[0])


@dataclass
class BurgersProblem:
    """A Burgers-type Cauchy problem on a uniform x-grid.

    ``coeffs`` provides a, b, c, f, g (its d is ignored: the linearizing
    substitution leaves v unchanged under any x-independent zeroth-order
    term, so the kernel is built with d = 0).  ``classical`` forces or
    forbids the constant-viscosity scaling; by default it is detected from
    the coefficients.  ``v0_antiderivative`` may supply an analytic
    int_0^y v0; otherwise a dense numerical one is built on demand.
    """

    coeffs: CoefficientSet
    v0: Callable[[float], float]
    xs: np.ndarray
    classical: Optional[bool] = None
    v0_antiderivative: Optional[Callable[[float], float]] = None
    tol: float = 1e-10
    _kernel: Optional[HeatKernel] = field(default=None, repr=False)
    _v0_dense: Optional[_DenseAntiderivative] = field(default=None, repr=False)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        if self.classical is None:
            self.classical = _is_classical(self.coeffs)

    def kernel(self) -> HeatKernel:
        if self._kernel is None:
            zero = lambda t: 0.0
            self._kernel = make_kernel(self.coeffs.replace_d(zero, zero),
                                       tol=self.tol)
        return self._kernel

    def antiderivative(self, half_width: float) -> Callable[[float], float]:
        if self.v0_antiderivative is not None:
            return self.v0_antiderivative
        if self._v0_dense is None:
            self._v0_dense = _DenseAntiderivative(self.v0, half_width)
        else:
            self._v0_dense.extend(half_width)
        return self._v0_dense

    def v0_bound(self, half_width: float) -> float:
        ys = np.linspace(-half_width, half_width, 513)
        return float(np.max(np.abs([self.v0(y) for y in ys])))


def cole_hopf(u: GridField) -> GridField:
    """v = -2 u_x / u with fourth-order differencing (one-sided at edges)."""
    if np.any(u.values <= 0.0):
        raise ValueError("Cole–Hopf transform requires strictly positive u")
    v = -2.0 * d1_uniform4(u.values, u.dx) / u.values
    return GridField(u.xs, u.ts, v)


def solve_burgers_ivp(prob: BurgersProblem, t,
                      quad_spec: QuadSpec = QuadSpec()) -> GridField:
    """Solve the Burgers-type Cauchy problem at time(s) ``t`` on ``prob.xs``.

    Computes the inner integral int K(x, y, t) exp(-s V0(y)) dy per grid
    point (s = 1/2 in general, 1/(2a) in the classical constant-viscosity
    case) in shifted log space, then applies -2 (resp. -2a) times the
    fourth-order x-derivative of the log-values.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    xs = prob.xs
    values = np.empty((len(ts), len(xs)))
    for i, ti in enumerate(ts):
        values[i] = _log_inner_integral(prob, float(ti), quad_spec)
    scale = 2.0 * prob.coeffs.a(0.0) if prob.classical else 2.0
    v = -scale * d1_uniform4(values, xs[1] - xs[0])
    return GridField(xs, ts, v)


def log_inner_integral(prob: BurgersProblem, t: float,
                       quad_spec: QuadSpec = QuadSpec()) -> np.ndarray:
    """log of the linearized solution u(x, t) on the problem grid."""
    return _log_inner_integral(prob, float(t), quad_spec)


def _log_inner_integral(prob, t, quad_spec):
    if t <= 0.0:
        raise DomainError("Burgers IVP solution is defined for t > 0")
    xs = prob.xs
    if prob.classical:
        a = prob.coeffs.a(0.0)
        s = 1.0 / (2.0 * a)
        var2 = 2.0 * a * t           # 2 * (Gaussian variance)
        ln = -0.5 * math.log(4.0 * math.pi * a * t)

        def coeff_of(x):
            # exponent of K(x, y, t) as a quadratic in y
            return -1.0 / (4.0 * a * t), x / (2.0 * a * t), ln - x * x / (4.0 * a * t)

        sigma = math.sqrt(var2)
    else:
        K = prob.kernel()
        lnk, a0, b0, g0, d0, e0, k0 = K.exponent_coefficients(t)
        if g0 >= 0.0:
            raise QuadratureError("kernel not integrable in y; cannot linearize")
        s = 0.5
        sigma = 1.0 / math.sqrt(-2.0 * g0)

        def coeff_of(x):
            return g0, b0 * x + e0, lnk + a0 * x * x + d0 * x + k0

    half = float(np.max(np.abs(xs))) + 1.0
    vb = prob.v0_bound(half + 16.0 * sigma)
    pad = s * vb * sigma * sigma  # peak shift of the tilted Gaussian
    width = pad + 12.0 * sigma

    # the antiderivative must cover every quadrature window
    means = []
    for x in (float(xs[0]), float(xs[-1])):
        q2, q1, _ = coeff_of(x)
        means.append(-q1 / (2.0 * q2))
    needed = max(abs(m) + width for m in means)
    V0 = prob.antiderivative(needed * 1.05 + 1.0)

    out = np.empty(len(xs))
    for j, x in enumerate(xs):
        q2, q1, q0 = coeff_of(float(x))
        mean = -q1 / (2.0 * q2)
        lo, hi = mean - width, mean + width

        def exponent(y):
            return q2 * y * y + q1 * y - s * V0(y)

        probe = np.linspace(lo, hi, 33)
        shift = max(exponent(y) for y in probe)

        def integrand(y):
            return math.exp(exponent(y) - shift)

        val = _quad(integrand, lo, hi, quad_spec, points=(mean,))
        if val <= 0.0:
            raise QuadratureError("nonpositive inner integral")
        out[j] = q0 + shift + math.log(val)
    return out


def burgers_residual(v: GridField, coeffs: CoefficientSet) -> GridField:
    """Residual of the Burgers-type equation on the interior time levels.

    Evaluates v_t + a (v v_x - v_xx) + (g - c x) v_x - c v + 2 (f - 2 b x)
    with second-order central time differencing and fourth-order space
    differencing; requires at least three stored levels.
    """
    if len(v.ts) < 3:
        raise ValueError("need at least 3 time levels for v_t")
    vt = dt_central(v.values, v.ts)
    xs = v.xs
    res = np.empty_like(vt)
    for i, t in enumerate(v.ts[1:-1]):
        w = v.values[i + 1]
        wx = d1_uniform4(w, v.dx)
        wxx = d2_uniform4(w, v.dx)
        a = coeffs.a(t)
        b = coeffs.b(t)
        c = coeffs.c(t)
        f = coeffs.f(t)
        g = coeffs.g(t)
        res[i] = (vt[i] + a * (w * wx - wxx) + (g - c * xs) * wx
                  - c * w + 2.0 * (f - 2.0 * b * xs))
    return GridField(xs, v.ts[1:-1], res)


@dataclass(frozen=True)
class TravelingWaveSpec:
    """Constants of the moving-frame reduction plus the profile's anchor.

    The reduction fixes the profile F only up to its value at one point;
    ``F0`` anchors F at the left edge ``z_window[0]``.
    """

    c0: float
    c1: float
    c2: float
    c3: float
    c4: float
    beta0_init: float
    gamma0_init: float
    z_window: tuple
    F0: float

    def __post_init__(self):
        if self.beta0_init == 0.0:
            raise ValueError("beta(0) must be nonzero")
        z0, z1 = self.z_window
        if not z1 > z0:
            raise ValueError("z_window must be an increasing pair")


class TravelingWave:
    """v(x, t) = beta(t) F(beta(t) x + gamma(t)) plus the induced coefficients."""

    def __init__(self, spec, a, c, T, frame_sol, mu_sol, poles):
        self.spec = spec
        self.a = a
        self.c = c
        self.T = float(T)
        self._frame = frame_sol
        self._mu = mu_sol
        self.poles = poles

    def beta(self, t: float) -> float:
        return float(self._frame(self._check_t(t))[0])

    def gamma(self, t: float) -> float:
        return float(self._frame(self._check_t(t))[1])

    def _check_t(self, t):
        t = float(t)
        if t < 0.0 or t > self.T * (1.0 + 1e-12):
            raise DomainError(f"t={t} outside [0, {self.T}]")
        return min(t, self.T)

    def profile(self, z: float) -> float:
        """F(z) = -2 mu'(z) / mu(z); raises near the zeros of mu."""
        z = float(z)
        z0, z1 = self.spec.z_window
        if z < z0 - 1e-12 or z > z1 + 1e-12:
            raise DomainError(f"z={z} outside the profile window [{z0}, {z1}]")
        mu, dmu = self._mu(float(np.clip(z, z0, z1)))
        if abs(mu) < 1e-12 * max(1.0, abs(dmu)):
            raise SingularityError(f"profile pole near z={z:.6g}")
        return -2.0 * dmu / mu

    def __call__(self, x: float, t: float) -> float:
        b = self.beta(t)
        return b * self.profile(b * float(x) + self.gamma(t))

    def induced_g(self, t: float) -> float:
        return self.spec.c1 * self.a(t) * self.beta(t)

    def induced_b(self, t: float) -> float:
        return -0.5 * self.spec.c2 * self.a(t) * self.beta(t) ** 4

    def induced_f(self, t: float) -> float:
        b = self.beta(t)
        return 0.5 * self.a(t) * b ** 3 * (2.0 * self.spec.c2 * self.gamma(t)
                                           + self.spec.c3)

    def induced_coefficients(self, da=None) -> CoefficientSet:
        """Coefficient set (with d = 0) for which the wave is an exact solution."""
        zero = lambda t: 0.0
        return CoefficientSet(self.a, self.induced_b, self.c, zero,
                              self.induced_f, self.induced_g,
                              da if da is not None else zero, zero, self.T)


def traveling_wave(spec: TravelingWaveSpec, a: Callable[[float], float],
                   c: Callable[[float], float], T: float = 2.0,
                   tol: float = 1e-12) -> TravelingWave:
    """Construct a traveling-wave solution and the coefficients it induces.

    Integrates the frame equations beta' = c beta, gamma' = c0 a beta^2 on
    [0, T] and the profile's linear second-order equation

        mu'' = (c0 + c1) mu' - (c2 z^2 + c3 z + c4) mu / 2

    over the z-window with mu(z0) = 1, mu'(z0) = -F0/2, so that
    F = -2 mu'/mu matches the anchor; zeros of mu are located by sign scan
    plus bisection and reported as the profile's poles.
    """

    def frame_rhs(t, y):
        return [c(t) * y[0], spec.c0 * a(t) * y[0] ** 2]

    frame = _solve_ivp(frame_rhs, (0.0, T), [spec.beta0_init, spec.gamma0_init],
                       method="DOP853", dense_output=True, rtol=tol, atol=1e-14)
    if not frame.success:
        raise IntegrationError(f"frame integration failed: {frame.message}")

    lam = spec.c0 + spec.c1
    z0, z1 = spec.z_window

    def mu_rhs(z, y):
        pot = 0.5 * (spec.c2 * z * z + spec.c3 * z + spec.c4)
        return [y[1], lam * y[1] - pot * y[0]]

    mu = _solve_ivp(mu_rhs, (z0, z1), [1.0, -spec.F0 / 2.0], method="DOP853",
                    dense_output=True, rtol=tol, atol=1e-14)
    if not mu.success:
        raise IntegrationError(f"profile integration failed: {mu.message}")

    zs = np.linspace(z0, z1, _POLE_SCAN_POINTS + 1)
    vals = mu.sol(zs)[0]
    poles = []
    for k in np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]:
        poles.append(brentq(lambda z: float(mu.sol(z)[0]), zs[k], zs[k + 1],
                            xtol=1e-12))

    return TravelingWave(spec, a, c, T, frame.sol, mu.sol, poles)


def integrate_profile_direct(spec: TravelingWaveSpec,
                             tol: float = 1e-12):
    """Profile F by direct integration of its first-order nonlinear ODE.

    Cross-check path for :func:`traveling_wave`; blows up at the profile's
    poles, which the linear route handles as zeros.
    """
    lam = spec.c0 + spec.c1
    z0, z1 = spec.z_window

    def rhs(z, y):
        F = y[0]
        return [lam * F + 0.5 * F * F
                + spec.c2 * z * z + spec.c3 * z + spec.c4]

    def escape(z, y):
        return abs(y[0]) - 1e10

    escape.terminal = True
    sol = _solve_ivp(rhs, (z0, z1), [spec.F0], method="DOP853",
                     dense_output=True, rtol=tol, atol=1e-14, events=escape)
    if not sol.success and sol.status != 1:
        raise IntegrationError(f"direct profile integration failed: {sol.message}")
    z_end = sol.t[-1]

    def F(z):
        z = float(z)
        if z < z0 - 1e-12 or z > z_end + 1e-12:
            raise DomainError(f"z={z} outside the integrated range "
                              f"[{z0}, {z_end:.6g}]")
        return float(sol.sol(float(np.clip(z, z0, z_end)))[0])

    F.z_end = z_end
    return F


def _log_cosh(s: float) -> float:
    s = abs(s)
    return s + math.log1p(math.exp(-2.0 * s)) - math.log(2.0)


class BatemanWave:
    """Constant-speed exact solutions of v_t + v v_x = a v_xx.

    ``sign="+"`` gives the tangent family (poles where the argument hits
    pi/2 + n pi); ``sign="-"`` gives the monotone kink, evaluated through
    tanh so large arguments cannot overflow.  The kink connects A - V on the
    far left to -A - V on the far right and travels at speed -V.
    """

    def __init__(self, A: float, V: float, a: float, c: float, sign: str):
        if not A > 0.0:
            raise ValueError("A must be positive")
        if not a > 0.0:
            raise ValueError("a must be positive")
        if sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")
        self.A, self.V, self.a, self.c, self.sign = (float(A), float(V),
                                                     float(a), float(c), sign)

    def _theta(self, x, t):
        return self.A * (np.asarray(x, dtype=float) + self.V * t - self.c) \
            / (2.0 * self.a)

    def __call__(self, x, t: float):
        th = self._theta(x, t)
        if self.sign == "+":
            off = th - math.pi / 2.0
            dist = np.abs(off - math.pi * np.round(off / math.pi))
            if np.any(dist < 1e-6):
                raise SingularityError("evaluation too close to a tangent pole")
            val = -self.V + self.A * np.tan(th)
        else:
            val = -self.V - self.A * np.tanh(th)
        return float(val) if np.asarray(x).ndim == 0 else val

    def initial_profile(self):
        return lambda x: self(x, 0.0)

    def initial_antiderivative(self):
        """Analytic int_0^y v(z, 0) dz for the kink family."""
        if self.sign != "-":
            raise ValueError("analytic antiderivative available for the kink only")
        th0 = self._theta(0.0, 0.0)

        def V0(y):
            th = self._theta(y, 0.0)
            return -self.V * y - 2.0 * self.a * (_log_cosh(th) - _log_cosh(th0))

        return V0
