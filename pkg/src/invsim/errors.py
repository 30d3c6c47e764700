"""Exception hierarchy shared by the package."""


class InvSimError(Exception):
    """Base class for every error raised by this package."""


class DomainError(InvSimError, ValueError):
    """An input lies outside the domain where a model is defined."""


class ConfigurationError(InvSimError, ValueError):
    """Airframe, maneuver or trajectory configuration is invalid."""


class SingularityError(InvSimError, ArithmeticError):
    """A guarded quantity came too close to a singular configuration."""


class IntegrationError(InvSimError):
    """The time-marching loop could not advance.

    Attributes
    ----------
    t : float
        Time at which the failure happened.
    stage : int or None
        Runge-Kutta stage index (1-4) when known.
    quantity : str
        Name of the offending quantity.
    """

    def __init__(self, message, t=float("nan"), stage=None, quantity=""):
        super().__init__(message)
        self.t = t
        self.stage = stage
        self.quantity = quantity
