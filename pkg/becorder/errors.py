"""Exception hierarchy shared by the library, the CLI and the HTTP layer."""


class BecOrderError(Exception):
    """Base class for every error raised by becorder"""


class ParseError(BecOrderError, ValueError):
    """Malformed bit string, method spec, beta spec or rule-set letters"""


class CapacityError(BecOrderError):
    """A string or universe exceeds a configured length cap"""

    def __init__(self, message: str, limit: int):
        super().__init__(message)
        self.limit = limit


class DegreeError(BecOrderError):
    """A Bernstein degree is smaller than the polynomial degree"""


class DomainError(BecOrderError):
    """An operation received an input outside its domain"""


class EndpointRootError(DomainError):
    """A Sturm count was requested at an endpoint that is itself a root"""


class UniverseMismatchError(DomainError):
    """Two rankings do not order the same set of strings"""


class InconsistencyError(BecOrderError):
    """Two independent decision oracles disagree"""
