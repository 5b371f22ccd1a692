"""Exception hierarchy shared by every module of the package."""


class MajcertError(Exception):
    """Base class for all errors raised by majcert."""


class DimensionMismatch(MajcertError, ValueError):
    pass


class NotUnitary(MajcertError, ValueError):
    pass


class NotPSD(MajcertError, ValueError):
    pass


class NotAPovm(MajcertError, ValueError):
    pass


class NotInvolution(MajcertError, ValueError):
    pass


class NotNormalized(MajcertError, ValueError):
    pass


class IndexOutOfRange(MajcertError, ValueError):
    pass


class BadOrdering(MajcertError, ValueError):
    pass


class BadSector(MajcertError, ValueError):
    pass


class BadContext(MajcertError, ValueError):
    pass


class BadParities(MajcertError, ValueError):
    pass


class EmbeddingMismatch(MajcertError, ValueError):
    pass


class CommutativityViolated(MajcertError, ValueError):
    """Operators declared to commute do not.

    ``pair`` names the worst offending pair and ``norm`` its commutator norm.
    """

    def __init__(self, message, pair=None, norm=None):
        super().__init__(message)
        self.pair = pair
        self.norm = norm


class OutsideBlock(MajcertError, ValueError):
    pass


class InvalidScenario(MajcertError, ValueError):
    pass


class NotRigid(MajcertError):
    """The exact rigidity construction does not apply to this scenario."""


class DimensionCollapse(MajcertError):
    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class MissingContext(MajcertError, ValueError):
    pass


class ZeroCounts(MajcertError, ValueError):
    pass


class ParseError(MajcertError, ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
