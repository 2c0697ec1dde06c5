class GFDivError(Exception):
    """Base exception for domain-specific errors."""

    error_type = "domain"

    def __init__(self, message: str, *, details: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_record(self) -> dict[str, str]:
        """Structured error record used at the CLI boundary."""
        record = {"status": "error", "error_type": self.error_type, "message": self.message}
        if self.details:
            record["details"] = self.details
        return record


class ConfigurationError(GFDivError):
    """Raised when settings or run configuration are missing or invalid."""

    error_type = "configuration"


class SpecParseError(GFDivError):
    """Raised when a command-line or JSON spec cannot be parsed."""

    error_type = "malformed_input"


class InvalidDistributionError(GFDivError):
    """Raised when a vector is not a probability distribution."""

    error_type = "invalid_distribution"


class SizeMismatchError(GFDivError):
    """Raised when alphabet sizes of the operands disagree."""

    error_type = "size_mismatch"


class DomainViolationError(GFDivError):
    """Raised when D_m(f) exceeds the domain supremum of G."""

    error_type = "domain_violation"


class IndeterminateLimitError(DomainViolationError):
    """Raised when a generator limit cannot be resolved numerically."""

    error_type = "indeterminate_limit"


class UnknownGeneratorError(GFDivError):
    error_type = "unknown_generator"


class ParameterRangeError(GFDivError):
    error_type = "parameter_range"


class MissingDerivativeError(GFDivError):
    error_type = "missing_derivative"


class NonFiniteObjectiveError(GFDivError):
    """Raised when every candidate output distribution gives an infinite objective."""

    error_type = "non_finite_objective"


class ConvexityRequiredError(GFDivError):
    error_type = "convexity_required"


class InvalidTransformError(GFDivError):
    """Raised when G' is not strictly positive on the sampled domain."""

    error_type = "invalid_transform"


class InvalidGeneratorError(GFDivError):
    """Raised when a generator breaks its normalization or curvature contract."""

    error_type = "invalid_generator"
