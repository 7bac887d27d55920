"""Tilt gesture recognition from 3-axis accelerometer streams."""

from .calibration import (CalibratedPoint, CalibrationSet, DirectionLabel, calibrate_steady,
                          direction_vector, load_calibration, new_calibration, save_calibration,
                          try_add_direction, virtual_border)
from .classify import Classification, LevelBoundaries, classify, quantize_level, tilt_angle
from .errors import TiltError
from .harness import EngineConfig, SessionResult, TargetSession, run_target_session
from .mapping import (ClickConfig, ClickEvent, ClickKind, DirectDispatcher, DirectEvent, PointerConfig,
                      PointerEvent, PointerMethod, PointerTracker, SequenceEvent, SequenceState,
                      TriggerMode, detect_tap, direct_dispatch, pointer_displacement, pointer_step,
                      sequence_step)
from .pipeline import Recognizer
from .preprocess import PreprocessConfig, StableDetector, StablePoint, detect_stable, window_stddev
from .profiles import Command, MappingProfile, load_builtin, load_profile, mode_switch, resolve
from .trace_io import (AccelSample, SynthSpec, Trace, parse_trace, read_trace, serialize_trace,
                       synth_keyframes, synth_trace, write_trace)

__version__ = "0.1.0"

__all__ = [
    "CalibratedPoint",
    "CalibrationSet",
    "DirectionLabel",
    "calibrate_steady",
    "direction_vector",
    "load_calibration",
    "new_calibration",
    "save_calibration",
    "try_add_direction",
    "virtual_border",
    "Classification",
    "LevelBoundaries",
    "classify",
    "quantize_level",
    "tilt_angle",
    "TiltError",
    "EngineConfig",
    "SessionResult",
    "TargetSession",
    "run_target_session",
    "ClickConfig",
    "ClickEvent",
    "ClickKind",
    "DirectDispatcher",
    "DirectEvent",
    "PointerConfig",
    "PointerEvent",
    "PointerMethod",
    "PointerTracker",
    "SequenceEvent",
    "SequenceState",
    "TriggerMode",
    "detect_tap",
    "direct_dispatch",
    "pointer_displacement",
    "pointer_step",
    "sequence_step",
    "Recognizer",
    "PreprocessConfig",
    "StableDetector",
    "StablePoint",
    "detect_stable",
    "window_stddev",
    "Command",
    "MappingProfile",
    "load_builtin",
    "load_profile",
    "mode_switch",
    "resolve",
    "AccelSample",
    "SynthSpec",
    "Trace",
    "parse_trace",
    "read_trace",
    "serialize_trace",
    "synth_keyframes",
    "synth_trace",
    "write_trace",
    "__version__",
]
