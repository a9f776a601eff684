"""Independent finite-difference solvers used purely for cross-validation.

A Crank–Nicolson scheme for the diffusion-type master equation and a
semi-implicit scheme (implicit diffusion, explicit upwinded advection) for
the Burgers-type equation, both on a fixed symmetric window with the edge
values pinned to the initial data (which is required to have decayed there).
Second order in space and time for the diffusion solver; the time-dependent
coefficients are sampled at the step midpoint to keep that order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from .coefficients import CoefficientSet
from .errors import StabilityError
from .kernel import GridField

DIVERGENCE_THRESHOLD = 1e8
CFL_LIMIT = 0.5


@dataclass(frozen=True)
class FDSpec:
    """Discretization of the window [-L, L]: n points, time step dt."""

    L: float
    n: int
    dt: float

    def __post_init__(self):
        if self.n < 16:
            raise ValueError("need at least 16 grid points")
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if not self.L > 0.0:
            raise ValueError("L must be positive")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, self.n)

    @property
    def dx(self) -> float:
        return 2.0 * self.L / (self.n - 1)


def _steps(t_end: float, dt: float):
    n_steps = max(1, int(round(t_end / dt)))
    return n_steps, t_end / n_steps


def _check_decay(phi_edge_left, phi_edge_right):
    worst = max(abs(phi_edge_left), abs(phi_edge_right))
    if worst > 1e-12:
        warnings.warn(f"initial data at the window edges is {worst:.2e}; "
                      "the pinned-boundary solution will be off by that much",
                      UserWarning, stacklevel=3)


def _growth_free(coeffs: CoefficientSet, t_end: float) -> bool:
    ts = np.linspace(0.0, t_end, 9)
    return all(abs(coeffs.b(t)) <= 1e-14 and abs(coeffs.d(t)) <= 1e-14
               and abs(coeffs.f(t)) <= 1e-14 for t in ts)


def _check_bounded(u, growth_free: bool, t: float):
    if not np.all(np.isfinite(u)):
        raise StabilityError(f"finite-difference solution lost finiteness at t={t:.6g}")
    if growth_free and np.max(np.abs(u)) > DIVERGENCE_THRESHOLD:
        raise StabilityError(f"finite-difference solution exceeded "
                             f"{DIVERGENCE_THRESHOLD:g} at t={t:.6g} with no "
                             "growth terms present")


def fd_diffusion(coeffs: CoefficientSet, phi: Callable[[float], float],
                 spec: FDSpec, t_end: float) -> GridField:
    """Crank–Nicolson solve of the master equation up to ``t_end``.

    Returns a two-level field (initial data and final time).  Tridiagonal
    systems are solved directly; coefficients are evaluated at the midpoint
    of every step.
    """
    xs = spec.xs
    dx = spec.dx
    u = np.array([phi(x) for x in xs], dtype=float)
    _check_decay(u[0], u[-1])
    u0 = u.copy()
    bc_l, bc_r = u[0], u[-1]
    growth_free = _growth_free(coeffs, t_end)

    n_steps, dt = _steps(t_end, spec.dt)
    xi = xs[1:-1]
    for step in range(n_steps):
        t_mid = (step + 0.5) * dt
        a = coeffs.a(t_mid)
        b = coeffs.b(t_mid)
        c = coeffs.c(t_mid)
        d = coeffs.d(t_mid)
        f = coeffs.f(t_mid)
        g = coeffs.g(t_mid)

        drift = (g - c * xi) / (2.0 * dx)
        lower = a / dx ** 2 + drift
        upper = a / dx ** 2 - drift
        diag = -2.0 * a / dx ** 2 + (d + f * xi - b * xi * xi)

        # explicit half-step (I + dt/2 A) u, boundary values folded in
        au = diag * u[1:-1]
        au += lower * u[:-2]
        au += upper * u[2:]
        rhs = u[1:-1] + 0.5 * dt * au
        rhs[0] += 0.5 * dt * lower[0] * bc_l
        rhs[-1] += 0.5 * dt * upper[-1] * bc_r

        m = len(xi)
        ab = np.zeros((3, m))
        ab[0, 1:] = -0.5 * dt * upper[:-1]
        ab[1, :] = 1.0 - 0.5 * dt * diag
        ab[2, :-1] = -0.5 * dt * lower[1:]
        u[1:-1] = solve_banded((1, 1), ab, rhs)

        if step % 50 == 0 or step == n_steps - 1:
            _check_bounded(u, growth_free, (step + 1) * dt)

    return GridField(xs, [0.0, t_end], np.vstack([u0, u]))


def fd_burgers(coeffs: CoefficientSet, v0: Callable[[float], float],
               spec: FDSpec, t_end: float) -> GridField:
    """Semi-implicit solve of the Burgers-type equation up to ``t_end``.

    The advection term (a v + g - c x) v_x is explicit with donor-cell
    upwinding and must satisfy max|speed| dt/dx <= 0.5 (checked each step);
    the diffusion term is Crank–Nicolson, so it imposes no step limit.
    """
    xs = spec.xs
    dx = spec.dx
    v = np.array([v0(x) for x in xs], dtype=float)
    v_init = v.copy()
    bc_l, bc_r = v[0], v[-1]

    n_steps, dt = _steps(t_end, spec.dt)
    xi = xs[1:-1]
    for step in range(n_steps):
        t = step * dt
        t_mid = t + 0.5 * dt
        a_mid = coeffs.a(t_mid)
        a = coeffs.a(t)
        b = coeffs.b(t)
        c = coeffs.c(t)
        f = coeffs.f(t)
        g = coeffs.g(t)

        speed = a * v[1:-1] + g - c * xi
        cfl = np.max(np.abs(speed)) * dt / dx
        if cfl > CFL_LIMIT:
            raise StabilityError(f"advection CFL {cfl:.3f} exceeds {CFL_LIMIT} "
                                 f"at t={t:.6g}; reduce dt")
        back = (v[1:-1] - v[:-2]) / dx
        fwd = (v[2:] - v[1:-1]) / dx
        grad = np.where(speed > 0.0, back, fwd)
        explicit = -speed * grad + c * v[1:-1] - 2.0 * (f - 2.0 * b * xi)

        lap = (v[:-2] - 2.0 * v[1:-1] + v[2:]) / dx ** 2
        rhs = v[1:-1] + dt * explicit + 0.5 * dt * a_mid * lap
        rhs[0] += 0.5 * dt * a_mid / dx ** 2 * bc_l
        rhs[-1] += 0.5 * dt * a_mid / dx ** 2 * bc_r

        m = len(xi)
        r = 0.5 * dt * a_mid / dx ** 2
        ab = np.zeros((3, m))
        ab[0, 1:] = -r
        ab[1, :] = 1.0 + 2.0 * r
        ab[2, :-1] = -r
        v[1:-1] = solve_banded((1, 1), ab, rhs)

        if step % 50 == 0 or step == n_steps - 1:
            _check_bounded(v, True, (step + 1) * dt)

    return GridField(xs, [0.0, t_end], np.vstack([v_init, v]))
