"""Exception hierarchy for gaussbasis."""


class GaussBasisError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(GaussBasisError, ValueError):
    """Input does not have the required matrix structure."""


class ZeroAmplitudeBase(GaussBasisError):
    """Requested base configuration has (numerically) vanishing amplitude."""


class SingularBlock(GaussBasisError):
    """The annihilation block of exp(M) is not invertible."""


class SingularCayley(GaussBasisError):
    """A Cayley transform in the dual-matrix construction is singular."""


class SingularQ(GaussBasisError):
    """``I - R* R`` is numerically singular."""


class SingularG(GaussBasisError):
    """``I - G`` is numerically singular."""


class NotRealMatrix(GaussBasisError, ValueError):
    """A real-matrix fast path was requested for a complex matrix."""


class InsufficientData(GaussBasisError, ValueError):
    """Too few points to perform a fit."""


class IllConditionedFit(GaussBasisError):
    """The least-squares design matrix is ill conditioned."""


class SizeLimit(GaussBasisError, ValueError):
    """Dense reference computation requested beyond its size guard."""


class DegenerateGroundState(GaussBasisError):
    """Exact diagonalization found a (near) degenerate ground state."""
