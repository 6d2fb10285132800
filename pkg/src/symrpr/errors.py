"""Exception types shared across the kinematics modules."""


class KinematicsError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidJointPoint(KinematicsError):
    """A (nu, delta2, delta3) chart point maps to a negative squared leg length."""


class DegeneratePolynomial(KinematicsError):
    """All coefficients of the characteristic cubic vanish within tolerance."""


class LeadingCoefficientZero(KinematicsError):
    """The cubic discriminant is requested but the leading coefficient vanishes."""


class OnBifurcationBoundary(KinematicsError):
    """The queried slice level coincides with a bifurcation value of the cusp count."""


class AtCusp(KinematicsError):
    """An arc classification was requested too close to a cusp angle."""


class OnSingularity(KinematicsError):
    """The pose lies on the singular set, where aspects and labels are undefined."""


class DifferentAspects(KinematicsError):
    """Start and goal poses do not share an aspect signature."""


class PlanInfeasible(KinematicsError):
    """No valid path was found within the allowed working-level retries."""


class SingularityHit(KinematicsError):
    """Continuation reached the singular set (|g| under margin, or a dead fold)."""


class BranchJump(KinematicsError):
    """Continuation could not follow a single solution branch within the step bound."""
