"""Exception hierarchy for exoflr."""

from __future__ import annotations


class ExoFlrError(Exception):
    """Base class for all errors raised by exoflr."""


# fourier
class InvalidCurve(ExoFlrError, ValueError):
    pass


class TruncationTooLarge(ExoFlrError, ValueError):
    pass


class GridTooCoarse(ExoFlrError, ValueError):
    pass


class TruncationMismatch(ExoFlrError, ValueError):
    pass


# spectra / estimators
class TooFewSamples(ExoFlrError, ValueError):
    pass


class InvalidRegularization(ExoFlrError, ValueError):
    pass


class NoSelectedFrequencies(ExoFlrError):
    """The cut-off rule kept no frequency, so neither slope estimate exists."""


class DegenerateSpectrum(ExoFlrError):
    pass


class DegenerateCrossSpectrum(ExoFlrError):
    pass


class InvalidWeight(ExoFlrError, ValueError):
    pass


# exotest
class InconsistentEstimates(ExoFlrError, ValueError):
    pass


class DegenerateStudentization(ExoFlrError):
    """t_hat_n vanished: W is indistinguishable from X on the selected frequencies."""


# bootstrap
class NotAMultiplierScheme(ExoFlrError, ValueError):
    pass


class TooFewReplicates(ExoFlrError, ValueError):
    pass


# dgp
class DomainError(ExoFlrError, ValueError):
    pass


class InvalidBandwidth(ExoFlrError, ValueError):
    pass


class InvalidCorrelationPair(ExoFlrError, ValueError):
    pass


# harness
class CellFailed(ExoFlrError):
    pass


class ParseError(ExoFlrError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IoError(ExoFlrError, OSError):
    pass
