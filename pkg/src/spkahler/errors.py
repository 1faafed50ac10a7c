"""Exception hierarchy.

Every error raised by the library derives from :class:`SpecialKahlerError`,
so callers (the CLI in particular) can separate semantic failures from
programming errors.  Class names match the failure they report.
"""


class SpecialKahlerError(Exception):
    """Base class for all library errors."""


class ParseError(SpecialKahlerError, ValueError):
    pass


class SingularMatrix(SpecialKahlerError, ValueError):
    pass


class NotSymmetric(SpecialKahlerError, ValueError):
    pass


class NotSkew(SpecialKahlerError, ValueError):
    pass


class DimensionMismatch(SpecialKahlerError, ValueError):
    pass


class OddDimension(SpecialKahlerError, ValueError):
    pass


class PrerequisiteFailed(SpecialKahlerError, ValueError):
    pass


class DegenerateMetric(SpecialKahlerError, ValueError):
    pass


class NotCertified(SpecialKahlerError, ValueError):
    pass


class NotFlat(SpecialKahlerError, ValueError):
    pass


class TwistConditionsFailed(SpecialKahlerError, ValueError):
    pass


class NotLeftIdeal(SpecialKahlerError, ValueError):
    pass


class NotComplex(SpecialKahlerError, ValueError):
    pass


class DegenerateRestriction(SpecialKahlerError, ValueError):
    pass


class NotSymplecticDerivation(SpecialKahlerError, ValueError):
    pass


class DoesNotCommuteWithJ(SpecialKahlerError, ValueError):
    pass


class NotDerivation(SpecialKahlerError, ValueError):
    pass


class NotBilateralIdeal(SpecialKahlerError, ValueError):
    pass


class NotIsotropic(SpecialKahlerError, ValueError):
    pass


class ComplementNotJInvariant(SpecialKahlerError, ValueError):
    pass


class NotNormalizable(SpecialKahlerError, ValueError):
    """k(e, e) is not the square of a positive rational."""


class ReductionParameterNonzero(SpecialKahlerError, ValueError):
    """A structure parameter that must vanish for a double extension does not."""


class NotFlatSpecial(SpecialKahlerError, ValueError):
    pass


class NotEtaleAtPoint(SpecialKahlerError, ValueError):
    pass


class RepresentationInvalid(SpecialKahlerError, ValueError):
    pass


class NotKahlerVectorSpace(SpecialKahlerError, ValueError):
    pass


class UnknownFixture(SpecialKahlerError, KeyError):
    pass


class NotSubalgebra(SpecialKahlerError, ValueError):
    """A subspace is not closed under the operation being restricted."""
