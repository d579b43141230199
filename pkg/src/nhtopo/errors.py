"""Exception hierarchy shared by all nhtopo modules."""


class NHTopoError(Exception):
    """Base class for all errors raised by this package."""


class ComplexGapError(NHTopoError):
    """Band-gap radicand is negative (outside the weak-coupling regime)."""


class GammaZeroError(NHTopoError):
    """Jump operators are undefined at gamma = 0 (sign factor has no limit)."""


class DegenerateError(NHTopoError):
    """Effective Bloch vector vanishes: the state gap is closed at this k."""


class NotPositiveDefiniteError(NHTopoError):
    """Matrix expected to be positive definite has a non-positive eigenvalue."""


class DegenerateFillingError(NHTopoError):
    """Requested particle number falls inside a (near-)degenerate level pair."""


class DefectiveError(NHTopoError):
    """Eigenvector matrix is too ill-conditioned (exceptional point)."""


class NotSignDefiniteError(NHTopoError):
    """Operator square is not proportional to +1 or -1 times the identity."""


class InconsistentReportError(NHTopoError):
    """Symmetry triple matches no row of the classification table."""


class GapClosedError(NHTopoError):
    """Line gap closes on the momentum grid; winding number undefined."""


class NotChiralError(NHTopoError):
    """Chiral relation fails for the supplied family/operator pair."""


class PhaseStepError(NHTopoError):
    """Phase increments stay too large after the allowed grid refinements."""


class OnBoundaryError(NHTopoError):
    """Parameter point lies on a phase-transition line."""


class ComplexSpectrumError(NHTopoError):
    """Operation requires a real spectrum but complex eigenvalues were found."""


class NotThermalizableError(NHTopoError):
    """No positive metric operator is compatible with the couplings."""
