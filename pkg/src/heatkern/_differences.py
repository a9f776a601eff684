"""Finite-difference stencils on uniform grids.

Fourth-order first and second derivatives along the last axis, with one-sided
five-point stencils at the boundary rows, plus a three-level central time
derivative.  Shared by the Cole–Hopf transform, the residual evaluators and
the tests; the Crank–Nicolson oracle carries its own second-order stencils.
"""

import numpy as np


def d1_uniform4(y, dx):
    """Fourth-order first derivative of ``y`` along the last axis, spacing ``dx``."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] < 5:
        raise ValueError("need at least 5 samples along the last axis")
    h = float(dx)
    dy = np.empty_like(y)

    dy[..., 2:-2] = (y[..., :-4] - 8.0 * y[..., 1:-3]
                     + 8.0 * y[..., 3:-1] - y[..., 4:]) / (12.0 * h)

    dy[..., 0] = (-25.0 * y[..., 0] + 48.0 * y[..., 1] - 36.0 * y[..., 2]
                  + 16.0 * y[..., 3] - 3.0 * y[..., 4]) / (12.0 * h)
    dy[..., 1] = (-3.0 * y[..., 0] - 10.0 * y[..., 1] + 18.0 * y[..., 2]
                  - 6.0 * y[..., 3] + y[..., 4]) / (12.0 * h)
    dy[..., -2] = (3.0 * y[..., -1] + 10.0 * y[..., -2] - 18.0 * y[..., -3]
                   + 6.0 * y[..., -4] - y[..., -5]) / (12.0 * h)
    dy[..., -1] = (25.0 * y[..., -1] - 48.0 * y[..., -2] + 36.0 * y[..., -3]
                   - 16.0 * y[..., -4] + 3.0 * y[..., -5]) / (12.0 * h)
    return dy


def d2_uniform4(y, dx):
    """Fourth-order second derivative of ``y`` along the last axis, spacing ``dx``."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] < 6:
        raise ValueError("need at least 6 samples along the last axis")
    h2 = float(dx) * float(dx)
    d2 = np.empty_like(y)

    d2[..., 2:-2] = (-y[..., :-4] + 16.0 * y[..., 1:-3] - 30.0 * y[..., 2:-2]
                     + 16.0 * y[..., 3:-1] - y[..., 4:]) / (12.0 * h2)

    # one-sided six-point stencils keep fourth order at the edge rows
    c0 = np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0]) / 12.0
    c1 = np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0]) / 12.0
    d2[..., 0] = sum(c0[k] * y[..., k] for k in range(6)) / h2
    d2[..., 1] = sum(c1[k] * y[..., k] for k in range(6)) / h2
    d2[..., -1] = sum(c0[k] * y[..., -1 - k] for k in range(6)) / h2
    d2[..., -2] = sum(c1[k] * y[..., -1 - k] for k in range(6)) / h2
    return d2


def dt_central(values, ts):
    """Second-order time derivative of ``values`` (time on axis 0) at interior levels.

    ``ts`` must be uniformly spaced; returns an array with ``len(ts) - 2`` levels.
    """
    ts = np.asarray(ts, dtype=float)
    if len(ts) < 3:
        raise ValueError("need at least 3 time levels for a central time derivative")
    steps = np.diff(ts)
    if not np.allclose(steps, steps[0], rtol=1e-10, atol=0.0):
        raise ValueError("time levels must be uniformly spaced")
    dt = steps[0]
    return (values[2:] - values[:-2]) / (2.0 * dt)
