"""Exception hierarchy for the rlz package.

Everything raised on purpose derives from RlzError, so callers can catch one
type at the top. File-system failures surface as the builtin OSError.
"""


class RlzError(Exception):
    """Base class for all rlz errors."""


class InvalidParams(RlzError, ValueError):
    """A parameter is outside its documented range."""


class EmptyCorpus(RlzError, ValueError):
    """An operation that needs input documents received none."""


class FormatError(RlzError):
    """A file does not match its expected layout (bad magic, version, field)."""


class ChecksumMismatch(FormatError):
    """Stored content digest does not match the payload."""


class DictMismatch(RlzError):
    """An archive was opened against a dictionary it was not encoded with."""


class CorruptFactor(RlzError):
    """A copy factor points outside the dictionary."""


class CorruptStream(RlzError):
    """An encoded factor stream cannot be decoded back to valid factors."""


class TruncatedCode(CorruptStream):
    """A variable-byte code ended before its terminating byte."""


class UseAfterFinalize(RlzError):
    """An archive writer was used after finalize()."""


class OutOfRange(RlzError, IndexError):
    """A document id is not present in the archive."""
