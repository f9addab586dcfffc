"""Exception hierarchy. Every domain error derives from TwistedRabbitError."""


class TwistedRabbitError(Exception):
    pass


class InvalidDegreeError(TwistedRabbitError, ValueError):
    pass


class InvalidIndexError(TwistedRabbitError, ValueError):
    pass


class InvalidParameterError(TwistedRabbitError, ValueError):
    pass


class MalformedExpansionError(TwistedRabbitError, ValueError):
    pass


class AlreadyReducedError(TwistedRabbitError):
    pass


class NotABaseCaseError(TwistedRabbitError):
    pass


class IncompleteProfileError(TwistedRabbitError):
    pass


class LiftFailureError(TwistedRabbitError):
    """The hull of a lifted tree is not a valid marked tree."""


class RootFinderError(TwistedRabbitError):
    """Simultaneous root iteration did not converge."""


class MultiplicityError(TwistedRabbitError):
    """Fewer distinct roots than the degree; the roots were expected simple."""


class BudgetExceededError(TwistedRabbitError):
    pass


class InvalidViewportError(TwistedRabbitError, ValueError):
    pass


def check_degree(d) -> int:
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise InvalidDegreeError(f"degree must be an integer >= 2, got {d!r}")
    return d
