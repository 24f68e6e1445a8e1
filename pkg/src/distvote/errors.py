"""Exception hierarchy shared across the package."""


class DistVoteError(Exception):
    """Base class for all errors raised by distvote."""


class DomainError(DistVoteError):
    """A value violates a documented precondition or invariant."""


class DataError(DistVoteError):
    """An input file or data table cannot be used as requested."""


class ResourceGuardError(DistVoteError):
    """An enumeration would exceed its configured size guard."""
