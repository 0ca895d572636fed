"""Radial sixth-order constant Q-curvature: Delaunay orbits, invariants and curvature."""

from ._qcurv import *  # noqa: F401,F403
from ._qcurv import ConvergenceError, DomainError, FormatError, NumericalError  # noqa: F401

__version__ = "0.1.0"
