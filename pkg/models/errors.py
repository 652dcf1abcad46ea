"""
Exception hierarchy shared by the simulator packages
"""
from typing import Optional


class SimfairError(Exception):
    """Base class for every error raised by the simulator"""


class InvalidParameterError(SimfairError, ValueError):
    """A numeric argument lies outside its admissible range"""


class CapacityError(SimfairError):
    """A request exceeds a hard size cap (e.g. exhaustive search over 2K bits)"""


class ChannelModelError(SimfairError):
    """An internal invariant of the channel model was violated"""


class ConfigError(SimfairError):
    """A configuration line could not be parsed or validated"""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[str] = None):
        self.key = key
        self.line = line
        location = []
        if key:
            location.append(f"key '{key}'")
        if line:
            location.append(f"line {line}")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class ReportWriteError(SimfairError):
    """Writing a result artefact failed"""

    def __init__(self, path: str, cause: Exception):
        self.path = path
        self.cause = cause
        super().__init__(f"failed to write {path}: {cause}")
