"""Exception types shared across the package."""


class QSeriesError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QSeriesError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(QSeriesError):
    """A denominator factor came too close to zero."""


class NonConvergent(QSeriesError):
    """A series or product failed to converge under the active policy."""


class OrderMismatch(QSeriesError):
    """Arithmetic between formal series of different truncation orders."""


class NotInvertible(QSeriesError):
    """Attempt to invert a formal series with zero constant term."""


class OrderExceeded(QSeriesError):
    """Coefficient index beyond the truncation order of a formal series."""


class SamplingExhausted(QSeriesError):
    """The domain sampler failed to find admissible points."""


class MaxPanelsExceeded(QSeriesError):
    """Adaptive quadrature hit its panel budget before converging."""
