"""Structured errors shared across the package and surfaced by the CLI."""

from __future__ import annotations


class ApproxSenseError(Exception):
    """Base error carrying a machine-readable code next to the human message."""

    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, **self.details}


class DimensionMismatchError(ApproxSenseError):
    code = "dimension_mismatch"


class InvalidParameterError(ApproxSenseError):
    code = "invalid_parameter"


class StochasticOperatorError(ApproxSenseError):
    """Raised when an operation requires resolving operator randomness first."""

    code = "stochastic_operator"


class DeterministicOperatorError(ApproxSenseError):
    """Raised when an operation only makes sense for stochastic operators."""

    code = "deterministic_operator"


class EnumerationCapError(ApproxSenseError):
    code = "enumeration_cap_exceeded"


class InfeasibleThresholdError(ApproxSenseError):
    """No search candidate satisfies the sensitivity constraint.

    Carries ``min_sensitivity``, the smallest empirical sensitivity seen.
    """

    code = "infeasible_threshold"

    def __init__(self, message: str, min_sensitivity: float | None = None, **details):
        super().__init__(message, **details)
        self.min_sensitivity = min_sensitivity

    def to_dict(self) -> dict:
        d = super().to_dict()
        if self.min_sensitivity is not None:
            d["min_sensitivity"] = self.min_sensitivity
        return d


class ConfigError(ApproxSenseError):
    code = "config_invalid"


class MissingInputError(ApproxSenseError):
    code = "missing_input"


class UnknownSuiteError(ApproxSenseError):
    code = "unknown_suite"
