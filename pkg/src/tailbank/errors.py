"""Exception hierarchy shared across the package."""


class TailbankError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(TailbankError):
    """A distribution parameter violates its admissible range."""


class DomainError(TailbankError):
    """A data point lies outside the support of the distribution."""


class DegenerateDataError(TailbankError):
    """The data carries no information for the requested estimate."""


class InconclusiveDataError(TailbankError):
    """Too few tail points to fit anything meaningful."""


class ParseError(TailbankError):
    """A malformed input row; the message names the offending line."""


class MissingDataError(TailbankError):
    """A required record (e.g. a balance-sheet month) is absent."""
