"""Inverse simulation of fixed-wing aircraft maneuvers.

Given a prescribed flight path and roll history, :func:`invsim.inverse.run`
computes the thrust and control-surface deflections that fly it;
:func:`invsim.forward.round_trip` replays those controls through a forward
six-degree-of-freedom model to check the result.
"""

from .airframe import AirframeParams, load_airframe, mirage3
from .errors import (ConfigurationError, DomainError, IntegrationError, InvSimError,
                     SingularityError)
from .guards import Guards
from .inverse import ControlSeries, InverseSimulator, run
from .trajectory import ManeuverInput, MirageDoubleRoll, load_sampled, preprocess

__version__ = "0.1.0"

__all__ = [
    "AirframeParams", "load_airframe", "mirage3", "ConfigurationError", "DomainError",
    "IntegrationError", "InvSimError", "SingularityError", "Guards", "ControlSeries",
    "InverseSimulator", "run", "ManeuverInput", "MirageDoubleRoll", "load_sampled",
    "preprocess", "__version__",
]
