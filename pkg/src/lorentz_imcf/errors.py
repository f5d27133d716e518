"""Exception hierarchy shared by every module of the package."""


class FlowError(Exception):
    """Base class for all errors raised by the simulator."""


class NotSpacelike(FlowError):
    """The radial graph touched the light cone (|u_xi| >= (1 - eps) u)."""

    def __init__(self, message, node=None, stage=None):
        super().__init__(message)
        self.node = node
        self.stage = stage


class DegenerateConvexity(FlowError):
    """The convexity numerator u u_xixi + u^2 - 2 u_xi^2 is not positive."""

    def __init__(self, message, node=None, stage=None):
        super().__init__(message)
        self.node = node
        self.stage = stage


class StepUnderflow(FlowError):
    """The stable step dropped below the representable floor."""


class DomainError(FlowError, ValueError):
    """An argument lies outside the domain of a closed-form expression."""


class ConfigError(FlowError):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(ConfigError, ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message
