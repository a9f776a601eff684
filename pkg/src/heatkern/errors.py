"""Exception types shared across the package."""


class DomainError(ValueError):
    """Evaluation requested outside the validity interval of a solution."""


class SingularityError(ValueError):
    """A formula was evaluated at (or too close to) one of its singular points."""


class IntegrationError(RuntimeError):
    """An adaptive ODE integration failed (step-size underflow, solver abort)."""


class BlowUpError(IntegrationError):
    """A trajectory left the finite range before the requested horizon.

    Carries ``t_blowup``, the time at which the magnitude threshold was crossed.
    """

    def __init__(self, message, t_blowup):
        super().__init__(message)
        self.t_blowup = float(t_blowup)


class QuadratureError(RuntimeError):
    """An adaptive quadrature did not converge to the requested tolerance."""


class StabilityError(RuntimeError):
    """A finite-difference run violated its stability constraint or diverged."""
