"""
Exception hierarchy for lamekit.

Argument-style failures subclass ValueError so callers that only know about
ValueError keep working.
"""


class LamekitError(Exception):
    """Base class for all lamekit errors"""


class AlgebraError(LamekitError, ValueError):
    """Invalid input to an exact-algebra operation"""


class CurveError(LamekitError, ValueError):
    """Unsupported curve family or degenerate curve data"""


class SpectralError(LamekitError, ValueError):
    """Invalid Lamé ansatz request"""


class CatalogError(LamekitError):
    """Corrupt cover catalog data or an entry failing verification"""


class QuadratureError(LamekitError):
    """Numeric contour integration failure"""


class BranchPointClearanceError(QuadratureError, ValueError):
    """Path passes too close to a branch point"""


class BranchTrackingError(QuadratureError):
    """Analytic continuation of w could not pick a unique nearest root"""


class PeriodError(LamekitError, ValueError):
    """Invalid period-matrix input or failed consistency check"""


class ThetaError(LamekitError, ValueError):
    """Invalid Siegel matrix or failed theta identity"""


class SymplecticError(LamekitError, ValueError):
    """Integer symplectic algebra failure"""
