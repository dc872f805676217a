"""Exception hierarchy shared by the library and the command line."""


class KoszulError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(KoszulError, ValueError):
    """Multidegrees, vectors or matrices do not match the block structure."""


class ArityError(ShapeError):
    """Wrong number of polynomials / multidegrees for the requested operation."""


class DeterminantalityError(KoszulError):
    """The Weyman complex for the requested degree vector has more than two terms."""


class ModeError(KoszulError):
    """Arithmetic mode mismatch, or numeric data missing for a numeric operation."""


class NotAffineError(KoszulError):
    """The upper-left block of the partitioned MEP matrix is (numerically) singular."""


class DegenerateEigenvectorError(KoszulError):
    """No usable pivot was found while recovering coordinates from an eigenvector."""


class SingularMEPError(KoszulError):
    """The MEP stayed non-affine after the allowed number of coordinate changes."""


class MultiplicityUnsupportedError(KoszulError):
    """The eigenvalues of the Schur complement could not be separated."""
