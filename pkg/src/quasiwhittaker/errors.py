"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`QWError`; the CLI maps the class name to the ``ERROR <code>`` record.
"""


class QWError(Exception):
    """Base class for mathematical errors (CLI exit code 1)."""

    @property
    def code(self):
        return type(self).__name__


class NotCoprime(QWError):
    pass


class Empty(QWError):
    pass


class DivisionByZeroPoly(QWError, ZeroDivisionError):
    pass


class ZeroPhi(QWError):
    """The adapted machinery is undefined for the zero homomorphism."""


class PhiMismatch(QWError):
    pass


class ZeroVector(QWError):
    pass


class WrongCase(QWError):
    pass


class ReductionFailed(QWError):
    pass


class TruncationTooSmall(QWError):
    pass


class EmptyPoly(QWError):
    pass


class NonRational(QWError):
    pass


class ExprSyntaxError(ValueError):
    """Parse failure; carries the byte offset and the expected-token set."""

    code = "SyntaxError"

    def __init__(self, offset, expected, found=None):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        self.found = found
        what = "end of input" if found is None else repr(found)
        super().__init__(
            f"at offset {offset}: expected one of {', '.join(self.expected)}; got {what}"
        )


class ZeroDenominator(ValueError):
    code = "ZeroDenominator"

    def __init__(self, offset):
        self.offset = offset
        super().__init__(f"zero denominator at offset {offset}")
