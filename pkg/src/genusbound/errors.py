class GenusBoundError(Exception):
    """Base class for domain errors raised by this package."""


class InvalidFieldSize(GenusBoundError):
    pass


class WeilBoundViolation(GenusBoundError):
    pass


class InadmissibleTrace(GenusBoundError):
    pass


class InvalidWeilPolynomial(GenusBoundError):
    pass


class InconsistentFieldSize(GenusBoundError):
    pass


class NoConstraint(GenusBoundError):
    pass


class HypothesisViolated(GenusBoundError):
    pass


class VerificationInconclusive(GenusBoundError):
    pass


class InvalidCertificate(GenusBoundError):
    pass


class UnboundedSystem(GenusBoundError):
    pass
