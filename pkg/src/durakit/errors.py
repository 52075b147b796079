"""Exception types shared across the toolkit."""


class DurakitError(Exception):
    """Base class for all durakit errors."""


class SolverBoundError(DurakitError):
    """A sizing solver exhausted its search bound without meeting the target."""


class RareEventError(DurakitError):
    """A simulation was refused because the event is too rare for the trial budget."""


class CodecError(DurakitError):
    """Base class for encode/decode failures."""


class InsufficientFragmentsError(CodecError):
    """Fewer fragments available than required for reconstruction."""


class InconsistentFragmentsError(CodecError):
    """Fragments disagree on object id, scheme, length, or index layout."""


class ChecksumError(CodecError):
    """A fragment payload does not match its recorded CRC-32."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class MalformedFragmentError(CodecError):
    """A fragment file does not conform to the on-disk format."""


class UnrecoverableError(CodecError):
    """The surviving fragments do not determine the lost data."""
