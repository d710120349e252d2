"""Exception hierarchy.

Everything raised on bad *data* derives from :class:`DataError`; the CLI
maps those to exit status 2. Translator backends raise
:class:`TranslationFailed`, which maps to exit status 3.
"""

from __future__ import annotations


class SieveError(Exception):
    """Base class for all errors raised by this package."""


class DataError(SieveError, ValueError):
    """Input data is malformed or inconsistent."""


class LineCountMismatch(DataError):
    def __init__(self, n_src: int, n_tgt: int):
        self.n_src = n_src
        self.n_tgt = n_tgt
        super().__init__(
            f"source has {n_src} lines but target has {n_tgt} lines"
        )


class InvalidEncoding(DataError):
    def __init__(self, offset: int, line: int, name: str = "<stream>"):
        self.offset = offset
        self.line = line
        self.name = name
        super().__init__(
            f"{name}: invalid UTF-8 at byte offset {offset} (line {line})"
        )


class CorpusFormatError(DataError):
    pass


class FirstKTooLarge(DataError):
    def __init__(self, k: int, n: int):
        self.k = k
        self.n = n
        super().__init__(f"cannot take first {k} pairs of a {n}-pair corpus")


class SizeOutOfRange(DataError):
    pass


class LengthMismatch(DataError):
    pass


class EmptyInput(DataError):
    pass


class EmptyCorpus(DataError):
    pass


class EmptyValidation(DataError):
    pass


class DirectionMismatch(DataError):
    pass


class MalformedMarker(DataError):
    pass


class BpeModelError(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TranslationFailed(SieveError):
    """A translator backend could not produce output.

    ``index`` is the corpus index of the first pair in the failing batch,
    when known.
    """

    def __init__(self, reason: str, index: int | None = None):
        self.reason = reason
        self.index = index
        where = f" (pair index {index})" if index is not None else ""
        super().__init__(f"translation failed{where}: {reason}")

    def __reduce__(self):
        return (type(self), (self.reason, self.index))
