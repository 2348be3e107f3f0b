"""Exception hierarchy.

Each error carries a short machine-readable ``kind`` and the process exit
code the CLI uses when it escapes to the top level.
"""


class DdosBenchError(Exception):
    kind = "error"
    exit_code = 1


class FlowParseError(DdosBenchError, ValueError):
    kind = "parse_error"
    exit_code = 3

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDatasetError(DdosBenchError, ValueError):
    kind = "empty_dataset"
    exit_code = 4


class StratificationError(DdosBenchError, ValueError):
    kind = "stratification_error"
    exit_code = 5


class InputError(DdosBenchError, OSError):
    kind = "input_unreadable"
    exit_code = 6


class ShapeError(DdosBenchError, ValueError):
    kind = "shape_error"
    exit_code = 7


class FitError(DdosBenchError, ValueError):
    kind = "fit_error"
    exit_code = 8


class ConfigError(DdosBenchError, ValueError):
    kind = "config_error"
    exit_code = 9


class ArtifactError(DdosBenchError, ValueError):
    kind = "artifact_error"
    exit_code = 10
