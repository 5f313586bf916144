class TempoWalkError(Exception):
    """
    Base class for every error raised by tempowalk.
    """


class ContractViolationError(TempoWalkError, ValueError):
    """
    An exception that is raised when an operation is called outside of its documented preconditions, e.g. sampling
    from an empty neighborhood or asking for a timestamp group that does not exist.
    """


class InvalidEdgeError(ContractViolationError):
    """
    An exception that is raised when an edge carries a negative node id or a negative timestamp.
    """


class EdgeFormatError(TempoWalkError):
    """
    An exception that is raised when an edge or walk file cannot be parsed.
    """

    def __init__(self, message: str, *, path: str | None = None, line_number: int | None = None) -> None:
        self.path = path
        self.line_number = line_number
        location = ""
        if path is not None:
            location = f"{path}:{line_number}: " if line_number is not None else f"{path}: "
        elif line_number is not None:
            location = f"line {line_number}: "
        super().__init__(f"{location}{message}")


class ConfigError(TempoWalkError, ValueError):
    """
    An exception that is raised when a configuration value is out of range or inconsistent with another one.
    """


class UnknownSuiteError(ConfigError):
    """
    An exception that is raised when a benchmark suite name is not registered.
    """
