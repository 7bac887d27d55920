"""Exception hierarchy.

Everything raised for bad *data* (traces, calibration files, profiles,
border conflicts) derives from :class:`TiltError`, which is what the CLI maps
to exit status 2.
"""


class TiltError(Exception):
    """Base class for all recoverable data errors in tiltgest."""


# -- trace_io ---------------------------------------------------------------

class MalformedRecord(TiltError, ValueError):
    def __init__(self, line: int, reason: str = ""):
        self.line = line
        self.reason = reason
        msg = f"malformed record at line {line}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class NonMonotoneTimestamp(TiltError, ValueError):
    def __init__(self, line: int):
        self.line = line
        super().__init__(f"timestamp decreases at line {line}")


class EmptyTrace(TiltError, ValueError):
    def __init__(self):
        super().__init__("trace contains no samples")


class InvalidSpec(TiltError, ValueError):
    def __init__(self, field: str, reason: str = ""):
        self.field = field
        super().__init__(f"invalid synth spec field {field!r}" + (f": {reason}" if reason else ""))


# -- preprocess -------------------------------------------------------------

class WrongWindowLength(TiltError, ValueError):
    def __init__(self, got: int, expected: int):
        self.got = got
        self.expected = expected
        super().__init__(f"window has {got} samples, expected {expected}")


# -- calibration / classify ------------------------------------------------

class InvalidArgument(TiltError, ValueError):
    pass


class BorderViolation(TiltError):
    """A candidate point lies within the virtual border of an existing one."""

    def __init__(self, label, level: int = 1, distance: float = float("nan"), border: float = float("nan")):
        self.label = label
        self.level = level
        self.distance = distance
        self.border = border
        name = getattr(label, "value", label)
        super().__init__(
            f"border violation against {name} (level {level}): "
            f"distance {distance:.4f} <= virtual border {border:.4f}"
        )


class DuplicateLabel(TiltError):
    def __init__(self, label, level: int):
        self.label = label
        self.level = level
        super().__init__(f"{getattr(label, 'value', label)} level {level} is already calibrated")


class SteadyMissing(TiltError):
    def __init__(self):
        super().__init__("steady state must be calibrated first")


class EmptySet(TiltError):
    def __init__(self):
        super().__init__("calibration set needs a steady point and at least one direction")


class ZeroVector(TiltError, ValueError):
    def __init__(self):
        super().__init__("tilt angle is undefined for the zero vector")


class CalibrationFailed(TiltError):
    pass


# -- mapping / profiles ----------------------------------------------------

class InvalidConfig(TiltError, ValueError):
    pass


class ParseError(TiltError, ValueError):
    pass


class UnknownDirection(ParseError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown direction {name!r}")


class DuplicateGestureKey(ParseError):
    def __init__(self, mode: str, key):
        self.mode = mode
        self.key = key
        super().__init__(f"duplicate gesture {key!r} in mode {mode!r}")


class UnknownMode(TiltError, KeyError):
    def __init__(self, mode: str):
        self.mode = mode
        super().__init__(f"unknown mode {mode!r}")

    def __str__(self):
        return self.args[0]
