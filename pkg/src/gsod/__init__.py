"""Spectral construction of compactly supported axisymmetric steady Euler flows."""

from .errors import (DegenerateDenominator, GridTooCoarse, GSODError, InadmissibleR,
                     MapDegenerate, NegativeRadicand, NewtonDiverged, NotInvertible,
                     ShapeDiverged)
from .fourier import FourierSeries
from .grid import DiskBasis, DiskField
from .profiles import ProblemConstants, ProfileFunctions, fixture_a, fixture_b, make_constants

__version__ = "0.1.0"
