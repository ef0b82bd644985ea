"""Custom exceptions for the harness app."""


class HarnessError(Exception):
    """Base error for scenario evaluation and report handling."""
    pass


class ScenarioParseError(HarnessError):
    """Raised when a scenario file cannot be read or fails validation.

    Attributes:
        errors: Serializer error dict, when validation produced one.
        path: Scenario file the error refers to, if any.
    """

    def __init__(self, message, errors=None, path=None):
        super().__init__(message)
        self.errors = errors or {}
        self.path = path


class HypothesisViolationError(HarnessError):
    """Raised when a bound's hypothesis certificate fails for the scenario geometry."""
    pass
