"""Exception hierarchy shared by the solver modules."""


class GSODError(Exception):
    """Base class for every failure raised by this package."""


class MapDegenerate(GSODError):
    """The boundary perturbation folds the domain map (1 + eps*B <= 1/2 somewhere)."""


class NewtonDiverged(GSODError):
    """The Dirichlet Newton iteration did not reach its tolerance."""


class InadmissibleR(GSODError, ValueError):
    """The major radius violates a*R**2 - 3*b > 0."""


class NotInvertible(GSODError):
    """The frozen shape linearization is singular (a*R**2 == 3*b)."""


class DegenerateDenominator(GSODError):
    """The compatibility-constant denominator vanished."""


class ShapeDiverged(GSODError):
    """The quasi-Newton shape iteration stagnated or left the small-B regime."""


class NegativeRadicand(GSODError):
    """eps**2*F_R + Ftilde(psi) became non-positive, so the swirl is undefined."""


class GridTooCoarse(GSODError):
    """The quadrature grid cannot resolve the flow support."""
