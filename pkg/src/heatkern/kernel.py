"""Heat-kernel evaluation, Cauchy solving by quadrature, and closed forms.

The fundamental solution of the master equation has the Gaussian-exponential
form

    K(x, y, t) = (2 pi mu0(t))^(-1/2)
                 * exp(alpha0 x^2 + beta0 x y + gamma0 y^2
                       + delta0 x + eps0 y + kappa0)

with the coefficient functions supplied by the fundamental solution of the
quadratic-exponent ODE system.  Everything here works in log space: the
quadratic form is assembled once per evaluation time and reused across
(x, y), and quadratures shift by the peak exponent before exponentiating.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .characteristic import solve_characteristic
from .coefficients import CoefficientSet
from .errors import DomainError, QuadratureError, SingularityError
from .riccati import FundamentalRiccati, fundamental, superpose
from ._differences import d1_uniform4, d2_uniform4, dt_central

LOG_OVERFLOW = 700.0
CLOSED_FORM_KINDS = ("heat", "cable", "fokker-planck", "ou-drift")


class TruncationWarning(UserWarning):
    """Kernel mass outside the quadrature window exceeds the safe bound."""


class NonconservativeWarning(UserWarning):
    """The kernel does not correspond to a probability transition density."""


@dataclass(frozen=True)
class QuadSpec:
    """Adaptive quadrature tolerances (Gauss–Kronrod, QUADPACK)."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    limit: int = 4096


def _quad(f, lo, hi, spec: QuadSpec, points=None):
    pts = None
    if points is not None:
        pts = [p for p in points if lo < p < hi]
        pts = pts or None
    out = quad(f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
               limit=spec.limit, points=pts, full_output=1)
    if len(out) > 3:
        # QUADPACK flagged trouble; accept only if the reported error
        # estimate still meets the requested tolerance with margin
        val, abserr = out[0], out[1]
        if abserr > 10.0 * max(spec.abs_tol, spec.rel_tol * abs(val)):
            raise QuadratureError(f"quadrature did not converge: {out[3]}")
        return val
    return out[0]


@dataclass
class GridField:
    """A sampled space-time field on a uniform x-grid."""

    xs: np.ndarray
    ts: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ts = np.atleast_1d(np.asarray(self.ts, dtype=float))
        self.values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if self.values.shape != (len(self.ts), len(self.xs)):
            raise ValueError(f"values shape {self.values.shape} does not match "
                             f"(n_t={len(self.ts)}, n_x={len(self.xs)})")
        dx = np.diff(self.xs)
        if len(dx) and (np.any(dx <= 0.0)
                        or not np.allclose(dx, dx[0], rtol=1e-9, atol=0.0)):
            raise ValueError("x-grid must be uniform and increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    @property
    def dx(self) -> float:
        return float(self.xs[1] - self.xs[0])

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def level(self, i: int) -> np.ndarray:
        return self.values[i]

    def rows(self):
        for i, t in enumerate(self.ts):
            for j, x in enumerate(self.xs):
                yield t, x, self.values[i, j]

    def to_csv(self, fh, header=("t", "x", "u")):
        fh.write(",".join(header) + "\n")
        for row in self.rows():
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


@dataclass
class InitialData:
    """Initial data for the Cauchy problem: a callable or sampled pairs.

    Sampled data is interpolated piecewise-linearly and treated as zero
    outside its sample range.  ``L`` is the truncation half-width for the
    quadrature window; when omitted, the window is derived per evaluation
    point from the kernel's own Gaussian decay.
    """

    func: Optional[Callable[[float], float]] = None
    xs: Optional[np.ndarray] = None
    ys: Optional[np.ndarray] = None
    L: Optional[float] = None

    def __post_init__(self):
        if (self.func is None) == (self.xs is None):
            raise ValueError("provide exactly one of a callable or sample arrays")
        if self.xs is not None:
            self.xs = np.asarray(self.xs, dtype=float)
            self.ys = np.asarray(self.ys, dtype=float)
            if self.xs.ndim != 1 or self.xs.shape != self.ys.shape:
                raise ValueError("sample arrays must be 1-D and equally long")
            if np.any(np.diff(self.xs) <= 0.0):
                raise ValueError("sample x-values must be increasing")
            if not np.all(np.isfinite(self.ys)):
                raise ValueError("sample values must be finite")
        if self.L is not None and not self.L > 0.0:
            raise ValueError("truncation half-width L must be positive")

    @classmethod
    def from_callable(cls, func, L=None):
        return cls(func=func, L=L)

    @classmethod
    def from_samples(cls, xs, ys, L=None):
        return cls(xs=xs, ys=ys, L=L)

    @classmethod
    def gaussian(cls, width=1.0, center=0.0, amplitude=1.0, L=None):
        w = float(width)

        def phi(y):
            return amplitude * math.exp(-((y - center) / w) ** 2)

        return cls(func=phi, L=L)

    @property
    def support(self):
        if self.xs is None:
            return None
        return float(self.xs[0]), float(self.xs[-1])

    def __call__(self, y):
        if self.func is not None:
            return self.func(y)
        return float(np.interp(y, self.xs, self.ys, left=0.0, right=0.0))


class HeatKernel:
    """Evaluator for the Gaussian-form fundamental solution."""

    def __init__(self, fund: FundamentalRiccati):
        self.fund = fund
        self.coeffs = fund.coeffs
        self._cache: dict[float, tuple] = {}

    @property
    def T_valid(self) -> float:
        return self.fund.T_valid

    def exponent_coefficients(self, t: float) -> tuple:
        """(log_norm, alpha0, beta0, gamma0, delta0, eps0, kappa0) at ``t``."""
        t = float(t)
        hit = self._cache.get(t)
        if hit is None:
            v = self.fund.values(t)
            if v.mu0 <= 0.0:
                raise DomainError(f"mu0({t}) = {v.mu0:.3e} <= 0; kernel undefined")
            hit = (-0.5 * math.log(2.0 * math.pi * v.mu0), v.alpha0, v.beta0,
                   v.gamma0, v.delta0, v.eps0, v.kappa0)
            if len(self._cache) > 256:
                self._cache.clear()
            self._cache[t] = hit
        return hit

    def log_evaluate(self, x, y, t: float):
        ln, a0, b0, g0, d0, e0, k0 = self.exponent_coefficients(t)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        val = ln + a0 * x * x + b0 * x * y + g0 * y * y + d0 * x + e0 * y + k0
        return float(val) if val.ndim == 0 else val

    def evaluate(self, x, y, t: float):
        return _exp_guard(self.log_evaluate(x, y, t))

    __call__ = evaluate

    def y_gaussian(self, t: float, x: float) -> tuple[float, float]:
        """(mean, std) of the kernel's Gaussian in y at fixed ``x``."""
        _, _, b0, g0, _, e0, _ = self.exponent_coefficients(t)
        if g0 >= 0.0:
            raise QuadratureError(f"kernel is not integrable in y at t={t} "
                                  f"(gamma0 = {g0:.3e} >= 0)")
        mean = -(b0 * x + e0) / (2.0 * g0)
        return mean, 1.0 / math.sqrt(-2.0 * g0)

    def x_gaussian(self, t: float, y: float) -> tuple[float, float]:
        """(mean, std) of the kernel's Gaussian in x at fixed ``y``."""
        _, a0, b0, _, d0, _, _ = self.exponent_coefficients(t)
        if a0 >= 0.0:
            raise QuadratureError(f"kernel is not integrable in x at t={t} "
                                  f"(alpha0 = {a0:.3e} >= 0)")
        mean = -(b0 * y + d0) / (2.0 * a0)
        return mean, 1.0 / math.sqrt(-2.0 * a0)


def _exp_guard(log_value):
    arr = np.asarray(log_value, dtype=float)
    if np.any(arr > LOG_OVERFLOW):
        raise OverflowError(f"kernel log-value exceeds {LOG_OVERFLOW:g}; "
                            "evaluate in log space instead")
    out = np.exp(arr)
    return float(out) if arr.ndim == 0 else out


def make_kernel(coeffs: CoefficientSet, T: float | None = None,
                tol: float = 1e-10) -> HeatKernel:
    """Characteristic solve + fundamental solution + kernel, in one call."""
    chs = solve_characteristic(coeffs, T=T, tol=tol)
    return HeatKernel(fundamental(chs, coeffs, tol=tol))


class ClosedFormKernel:
    """One of the four elementary kernels, evaluated from its closed form."""

    def __init__(self, kind: str, **params):
        if kind not in CLOSED_FORM_KINDS:
            raise ValueError(f"unknown closed form {kind!r}; "
                             f"expected one of {CLOSED_FORM_KINDS}")
        self.kind = kind
        self.params = {k: float(v) for k, v in params.items()}
        p = self.params
        if kind == "heat" and not p.get("a", 1.0) > 0.0:
            raise ValueError("heat closed form requires a > 0")
        if kind == "cable":
            if not (p.get("lam", 1.0) != 0.0 and p.get("tau", 2.0) > 0.0):
                raise ValueError("cable closed form requires lam != 0, tau > 0")
        if kind == "ou-drift":
            if not (p.get("a", 1.0) > 0.0 and p.get("k", 1.0) > 0.0):
                raise ValueError("ou-drift closed form requires a > 0, k > 0")

    def log_evaluate(self, x, y, t: float):
        t = float(t)
        if t <= 0.0:
            raise DomainError("closed-form kernels are defined for t > 0")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        p = self.params
        if self.kind == "heat":
            a = p.get("a", 1.0)
            val = -0.5 * math.log(4.0 * math.pi * a * t) - (x - y) ** 2 / (4.0 * a * t)
        elif self.kind == "cable":
            lam = p.get("lam", 1.0)
            tau = p.get("tau", 2.0)
            val = (0.5 * math.log(tau) + t / tau
                   - 0.5 * math.log(4.0 * math.pi * lam * lam * t)
                   - tau * (x - y) ** 2 / (4.0 * lam * lam * t))
        elif self.kind == "fokker-planck":
            s = 1.0 - math.exp(-2.0 * t)
            val = (-0.5 * math.log(2.0 * math.pi * s)
                   - (x - math.exp(-t) * y) ** 2 / (2.0 * s))
        else:  # ou-drift
            a = p.get("a", 1.0)
            k = p.get("k", 1.0)
            g = p.get("g", 0.0)
            sh = math.sinh(k * t)
            core = (k * (x * math.exp(-k * t / 2.0) - y * math.exp(k * t / 2.0))
                    + 2.0 * g * math.sinh(k * t / 2.0))
            val = (0.5 * math.log(k) + k * t / 2.0
                   - 0.5 * math.log(4.0 * math.pi * a * sh)
                   - core ** 2 / (4.0 * a * k * sh))
        return float(val) if val.ndim == 0 else val

    def evaluate(self, x, y, t: float):
        return _exp_guard(self.log_evaluate(x, y, t))

    __call__ = evaluate


def closed_form(example: str, **params) -> ClosedFormKernel:
    """Closed-form kernel for one of heat, cable, fokker-planck, ou-drift."""
    return ClosedFormKernel(example, **params)


def _phi_window(phi: InitialData, lo: float, hi: float):
    support = phi.support
    if support is not None:
        lo, hi = max(lo, support[0]), min(hi, support[1])
    return lo, hi


def _tail_fraction(L: float, mean: float, std: float) -> float:
    z_hi = (L - mean) / (math.sqrt(2.0) * std)
    z_lo = (L + mean) / (math.sqrt(2.0) * std)
    return 0.5 * (math.erfc(z_hi) + math.erfc(z_lo))


def _convolve_at(K: HeatKernel, phi: InitialData, x: float, t: float,
                 spec: QuadSpec) -> float:
    """One point of u(x, t) = int K(x, y, t) phi(y) dy, in shifted log space."""
    ln, a0, b0, g0, d0, e0, k0 = K.exponent_coefficients(t)
    mean, std = K.y_gaussian(t, x)
    if phi.L is not None:
        lo, hi = -phi.L, phi.L
        frac = _tail_fraction(phi.L, mean, std)
        if frac > 1e-8:
            warnings.warn(f"kernel mass {frac:.2e} outside [-L, L] at x={x}",
                          TruncationWarning, stacklevel=3)
    else:
        lo, hi = mean - 10.0 * std, mean + 10.0 * std
    lo, hi = _phi_window(phi, lo, hi)
    if hi <= lo:
        return 0.0

    peak = min(max(mean, lo), hi)
    shift = g0 * peak * peak + (b0 * x + e0) * peak

    def integrand(y):
        return math.exp(g0 * y * y + (b0 * x + e0) * y - shift) * phi(y)

    j = _quad(integrand, lo, hi, spec, points=(mean,))
    return math.exp(ln + a0 * x * x + d0 * x + k0 + shift) * j


def solve_ivp(K: HeatKernel, phi: InitialData, xs, t,
              quad_spec: QuadSpec = QuadSpec()) -> GridField:
    """Solve the Cauchy problem by kernel quadrature on the grid ``xs``.

    ``t`` may be a scalar or a sequence of times; each requested time must
    lie in (0, T_valid].  Returns the sampled field u(x, t) with
    u(x, t) = int K(x, y, t) phi(y) dy.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    xs = np.asarray(xs, dtype=float)
    values = np.empty((len(ts), len(xs)))
    for i, ti in enumerate(ts):
        for j, x in enumerate(xs):
            values[i, j] = _convolve_at(K, phi, float(x), float(ti), quad_spec)
    return GridField(xs, ts, values)


def expectation(K: HeatKernel, phi: InitialData, x: float, t: float,
                quad_spec: QuadSpec = QuadSpec()) -> float:
    """E_x[phi(X_t)] = int K(x, y, t) phi(y) dy for transition-density kernels.

    Warns when the coefficient set has nonzero d, b or f, in which case the
    kernel is a Green function but not a probability transition density.
    """
    coeffs = K.coeffs
    ts_probe = np.linspace(0.0, min(t, coeffs.domain_end), 7)
    if any(abs(coeffs.d(s)) > 1e-14 or abs(coeffs.b(s)) > 1e-14
           or abs(coeffs.f(s)) > 1e-14 for s in ts_probe):
        warnings.warn("kernel has nonzero d, b or f; expectation is not "
                      "probabilistic", NonconservativeWarning, stacklevel=2)
    return _convolve_at(K, phi, float(x), float(t), quad_spec)


def normalization(K, t: float, variable: str = "y", L: float | None = None,
                  quad_spec: QuadSpec = QuadSpec()) -> float:
    """Integrate the kernel over one variable with the other fixed at 0."""
    if variable not in ("x", "y"):
        raise ValueError("variable must be 'x' or 'y'")
    ev = K.evaluate if hasattr(K, "evaluate") else K
    if variable == "y":
        f = lambda y: ev(0.0, y, t)
    else:
        f = lambda x: ev(x, 0.0, t)
    if L is None:
        if isinstance(K, HeatKernel):
            mean, std = (K.y_gaussian(t, 0.0) if variable == "y"
                         else K.x_gaussian(t, 0.0))
            lo, hi = mean - 12.0 * std, mean + 12.0 * std
        else:
            lo, hi = _auto_window(f)
    else:
        lo, hi = -float(L), float(L)
    return _quad(f, lo, hi, quad_spec)


def _auto_window(f, start=8.0, cap=4096.0):
    """Grow a symmetric window until the integrand's edges are negligible."""
    w = start
    center = abs(f(0.0))
    while w < cap:
        edge = max(abs(f(-w)), abs(f(w)))
        if edge <= 1e-18 * max(center, 1e-300):
            return -w, w
        w *= 2.0
    return -w, w


def transform_solve(fund: FundamentalRiccati, phi: InitialData, xs, t: float,
                    init=(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0),
                    quad_spec: QuadSpec = QuadSpec()) -> GridField:
    """Solve the Cauchy problem through the reduction to v_tau = v_xi_xi.

    The substitution u = mu^(-1/2) exp(alpha x^2 + delta x + kappa)
    v(beta x + eps, gamma) with a solution of the quadratic-exponent system
    maps the master equation onto the constant heat equation, which is then
    solved with the standard Gaussian kernel and mapped back.  With the
    default initial data the map is the identity at t = 0, so v(., gamma(0))
    equals phi.  Serves as an independent path against :func:`solve_ivp`.
    """
    t = float(t)
    xs = np.asarray(xs, dtype=float)
    mu_i, alpha_i, beta_i, gamma_i, delta_i, eps_i, kappa_i = (float(v) for v in init)
    if mu_i <= 0.0 or beta_i == 0.0:
        raise ValueError("transform requires mu(0) > 0 and beta(0) != 0")

    # gamma must advance strictly; sample the path once up front
    probe = np.linspace(t / 64.0, t, 64)
    gammas = np.array([superpose(fund, init, s).gamma for s in probe])
    if np.any(np.diff(gammas) <= 0.0) or gammas[0] <= gamma_i:
        raise SingularityError("gamma(t) is not strictly increasing on (0, t]")

    state = superpose(fund, init, t)
    if state.mu <= 0.0:
        raise SingularityError(f"mu({t}) = {state.mu:.3e} <= 0 under this "
                               "transform")
    dtau = state.gamma - gamma_i
    sqrt_mu_i = math.sqrt(mu_i)

    def v0(eta):
        x0 = (eta - eps_i) / beta_i
        damp = -(alpha_i * x0 * x0 + delta_i * x0 + kappa_i)
        return phi(x0) * sqrt_mu_i * math.exp(damp)

    sigma_g = math.sqrt(2.0 * dtau)
    ln_norm = -0.5 * math.log(4.0 * math.pi * dtau)
    support = phi.support
    eta_bounds = None
    if phi.L is not None:
        pts = sorted((beta_i * -phi.L + eps_i, beta_i * phi.L + eps_i))
        eta_bounds = pts
    if support is not None:
        pts = sorted((beta_i * support[0] + eps_i, beta_i * support[1] + eps_i))
        eta_bounds = (max(eta_bounds[0], pts[0]), min(eta_bounds[1], pts[1])) \
            if eta_bounds else pts

    values = np.empty(len(xs))
    for j, x in enumerate(xs):
        xi = state.beta * x + state.eps
        lo, hi = xi - 12.0 * sigma_g, xi + 12.0 * sigma_g
        if eta_bounds is not None:
            lo, hi = max(lo, eta_bounds[0]), min(hi, eta_bounds[1])
        if hi <= lo:
            values[j] = 0.0
            continue

        def integrand(eta, xi=xi):
            return math.exp(ln_norm - (xi - eta) ** 2 / (4.0 * dtau)) * v0(eta)

        v = _quad(integrand, lo, hi, quad_spec, points=(xi,))
        pre = math.exp(state.alpha * x * x + state.delta * x + state.kappa)
        values[j] = pre / math.sqrt(state.mu) * v
    return GridField(xs, [t], values[None, :])


def asymptotic_kernel(coeffs: CoefficientSet):
    """Small-time approximation of the kernel; for t -> 0+ checks only."""
    a0 = coeffs.a(0.0)
    c0 = coeffs.c(0.0)
    g0 = coeffs.g(0.0)
    da0 = coeffs.da(0.0)

    def log_K(x, y, t):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        diff = x - y
        val = (-0.5 * math.log(4.0 * math.pi * a0 * t)
               - diff ** 2 / (4.0 * a0 * t)
               + da0 / (8.0 * a0 ** 2) * diff ** 2
               - c0 / (4.0 * a0) * (x ** 2 - y ** 2)
               + g0 / (2.0 * a0) * diff)
        return float(val) if val.ndim == 0 else val

    def K(x, y, t):
        return _exp_guard(log_K(x, y, t))

    K.log_evaluate = log_K
    return K


def diffusion_residual(field: GridField, coeffs: CoefficientSet) -> GridField:
    """Residual of the master equation on the interior time levels of ``field``.

    Central second-order differencing in time, fourth-order in space; the
    returned field has len(ts) - 2 levels.
    """
    if len(field.ts) < 3:
        raise ValueError("need at least 3 time levels for the residual")
    ut = dt_central(field.values, field.ts)
    xs = field.xs
    res = np.empty_like(ut)
    for i, t in enumerate(field.ts[1:-1]):
        u = field.values[i + 1]
        ux = d1_uniform4(u, field.dx)
        uxx = d2_uniform4(u, field.dx)
        a = coeffs.a(t)
        b = coeffs.b(t)
        c = coeffs.c(t)
        d = coeffs.d(t)
        f = coeffs.f(t)
        g = coeffs.g(t)
        res[i] = ut[i] - (a * uxx - (g - c * xs) * ux
                          + (d + f * xs - b * xs * xs) * u)
    return GridField(xs, field.ts[1:-1], res)
