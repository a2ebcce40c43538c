"""Exception types shared across the package."""


class DtmfiltError(Exception):
    """Base class for all package-specific errors."""


class ParseError(DtmfiltError, ValueError):
    """Malformed input file; the message names the offending line."""


class ParameterError(DtmfiltError, ValueError):
    """Parameter outside its admissible range (m, p, dimensions, ...)."""


class DimensionMismatchError(DtmfiltError, ValueError):
    """Operands live in Euclidean spaces of different dimensions."""


class SizeGuardError(DtmfiltError, RuntimeError):
    """Requested construction exceeds the exhaustive-enumeration guard."""


class IntegrityError(DtmfiltError, ValueError):
    """A filtered complex violates face-monotonicity or closure."""


class SolverError(DtmfiltError, RuntimeError):
    """The minimax solver did not certify the requested tolerance.

    Carries the best bracket found so far as ``lower`` and ``upper``.
    """

    def __init__(self, message, lower, upper):
        super().__init__(message)
        self.lower = float(lower)
        self.upper = float(upper)
