"""Exception hierarchy shared by all frobh modules."""


class FrobhError(Exception):
    """Base class for all library errors."""


class NonConvergence(FrobhError):
    """An iterative solver exhausted its iteration budget."""


class NoConvergence(NonConvergence):
    """Alias used by the hodograph Newton solver."""


class EssentialSingularity(FrobhError):
    pass


class NotRational(FrobhError):
    """A residue/expansion was requested for data carrying multivalued parts."""


class IncompatibleRamification(FrobhError):
    """Requested Puiseux exponent does not divide the local order."""


class PathThroughSingularity(FrobhError):
    """The path deformation rule cannot clear an interior singularity."""


class BranchCut(FrobhError):
    """Polylogarithm evaluated on the cut without a side selection."""


class DegreeMismatch(FrobhError):
    """Zero and pole profiles of a cover do not balance."""


class CollidingMarkedPoints(FrobhError):
    pass


class DiscriminantHit(FrobhError):
    """Two canonical coordinates collided, or one vanished."""


class NonGeneric(FrobhError):
    """The cover has a multiple critical point (or no moduli at all)."""


class ProfileObstruction(FrobhError):
    """Operation requires a trivial ramification profile that the cover lacks."""


class UnsupportedGenus(FrobhError):
    """Basis families that only exist at positive genus."""


class BadIndex(FrobhError):
    pass


class DivergentPairing(FrobhError):
    """A principal-value term of the pairing failed to regularize."""


class SingularAtRamification(FrobhError):
    pass


class QuasiMomentumDegenerate(FrobhError):
    """The quasi-momentum vanishes at a ramification point."""


class SingularMetric(FrobhError):
    pass


class NotHomogeneous(FrobhError):
    """Quasi-momentum is not an eigenvector of the grading flow."""


class ZeroGrade(FrobhError):
    """Hamiltonian densities exclude grade-zero (Casimir) differentials."""


class ChargeNotOne(FrobhError):
    """Tau function formula requires charge d = 1."""


class BranchCollision(FrobhError):
    """Branch points of the elliptic curve collided or degenerated."""


class NomeOutOfDisk(FrobhError):
    pass
