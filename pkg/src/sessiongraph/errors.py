"""Exception hierarchy shared by all pipeline stages."""


class SessionGraphError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SessionGraphError, ValueError):
    pass


class MalformedLine(ParseError):
    pass


class BadTimestamp(ParseError):
    pass


class BadStatus(ParseError):
    pass


class SignatureDbError(SessionGraphError, ValueError):
    pass


class BadSection(SignatureDbError):
    pass


class BadCidr(SignatureDbError):
    pass


class DegenerateGraph(SessionGraphError, ValueError):
    pass


class DomainError(SessionGraphError, ValueError):
    pass


class DegenerateSample(SessionGraphError, ValueError):
    pass


class InfeasibleMoments(SessionGraphError, ArithmeticError):
    pass


class NonConvergence(SessionGraphError, ArithmeticError):
    pass


class MissingFit(SessionGraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ConfigError(SessionGraphError, ValueError):
    pass


class InputError(SessionGraphError, OSError):
    """An input path is missing or unreadable."""
