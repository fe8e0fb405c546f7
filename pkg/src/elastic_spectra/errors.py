"""Exception hierarchy shared across the toolkit.

Two top-level failure classes matter to callers: input problems (bad
parameters, out-of-envelope arguments, unsupported combinations) and
integrity problems (a certification or internal consistency check failed).
The CLI maps the former to exit status 1 and the latter to exit status 2.
"""


class ElasticSpectraError(Exception):
    """Base class for all toolkit errors."""


class InputError(ElasticSpectraError, ValueError):
    """Invalid argument, parameter set, or domain description."""


class ContractViolation(ElasticSpectraError):
    """A call was made without the data its contract requires."""


class RangeError(InputError):
    """Argument outside the supported accuracy envelope."""


class UnsupportedDimensionError(InputError):
    """Requested dimension is not implemented for this operation."""


class UnsupportedCombinationError(InputError):
    """Requested (domain, boundary condition) pair is deliberately not provided."""


class ResourceBudgetError(ElasticSpectraError):
    """Enumeration would exceed the configured mode budget; nothing was computed."""


class CompletenessError(ElasticSpectraError):
    """A query beyond the certified completeness bound was refused."""


class InsufficientRangeError(InputError):
    """Profile grid does not span the range the estimator needs."""


class TailDominatedError(InputError):
    """Heat-trace query in a regime where the spectral tail is not negligible."""


class DomainMismatchError(InputError):
    """Operation applied to a spectrum from the wrong kind of domain."""


class EvaluationError(ElasticSpectraError):
    """A scanned function returned a non-finite value.

    Carries the offending abscissa in ``abscissa``.
    """

    def __init__(self, message: str, abscissa: float):
        super().__init__(f"{message} at x={abscissa!r}")
        self.abscissa = abscissa


class CertificationError(ElasticSpectraError):
    """An emitted eigenfield failed its residual certification."""


class IntegrityError(ElasticSpectraError):
    """Internal consistency check failed (exit status 2 in the CLI)."""
