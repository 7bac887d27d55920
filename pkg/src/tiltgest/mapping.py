"""Turning classifications and raw samples into gesture events.

Three mapping schemes: direct (one excursion from steady = one gesture),
tilt sequences (directions chained until the return to steady), and pointer
movement with tap/shake clicks.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .calibration import DirectionLabel
from .classify import Classification
from .errors import InvalidConfig
from .trace_io import AccelSample

STEADY = DirectionLabel.STEADY


# ---------------------------------------------------------------------------
# events


@dataclass(frozen=True)
class DirectEvent:
    label: DirectionLabel
    level: int = 1
    t: int = 0
    type = "direct"

    def __post_init__(self):
        if self.label is STEADY:
            raise ValueError("a direct gesture cannot be Steady")

    def to_dict(self) -> dict:
        return {"t": self.t, "type": self.type, "label": self.label.value, "level": self.level}


@dataclass(frozen=True)
class SequenceEvent:
    labels: tuple[DirectionLabel, ...]
    t: int = 0
    type = "sequence"

    def __post_init__(self):
        if not self.labels or STEADY in self.labels:
            raise ValueError("a sequence needs at least one non-steady label")

    def to_dict(self) -> dict:
        return {"t": self.t, "type": self.type, "labels": [l.value for l in self.labels]}


@dataclass(frozen=True)
class PointerEvent:
    dx: float
    dy: float
    t: int = 0
    x: float | None = None
    y: float | None = None
    type = "pointer"

    def to_dict(self) -> dict:
        d = {"t": self.t, "type": self.type, "dx": self.dx, "dy": self.dy}
        if self.x is not None:
            d["x"], d["y"] = self.x, self.y
        return d


class ClickKind(enum.Enum):
    TAP = "Tap"
    SHAKE = "Shake"


@dataclass(frozen=True)
class ClickEvent:
    kind: ClickKind
    t: int = 0
    type = "click"

    def to_dict(self) -> dict:
        return {"t": self.t, "type": self.type, "kind": self.kind.value}


@dataclass(frozen=True)
class SequenceOverflow:
    """Diagnostic: a sequence grew past the maximum length and was dropped."""

    labels: tuple[DirectionLabel, ...]
    t: int = 0
    type = "sequence_overflow"

    def to_dict(self) -> dict:
        return {"t": self.t, "type": self.type, "labels": [l.value for l in self.labels]}


GestureEvent = DirectEvent | SequenceEvent | PointerEvent | ClickEvent


def event_to_json(ev) -> str:
    return json.dumps(ev.to_dict(), separators=(",", ":"))


def event_from_dict(d: dict):
    kind = d.get("type")
    t = int(d.get("t", 0))
    if kind == "direct":
        return DirectEvent(DirectionLabel.parse(d["label"]), int(d.get("level", 1)), t)
    if kind == "sequence":
        return SequenceEvent(tuple(DirectionLabel.parse(l) for l in d["labels"]), t)
    if kind == "pointer":
        return PointerEvent(float(d["dx"]), float(d["dy"]), t, d.get("x"), d.get("y"))
    if kind == "click":
        return ClickEvent(ClickKind(d["kind"]), t)
    if kind == "sequence_overflow":
        return SequenceOverflow(tuple(DirectionLabel.parse(l) for l in d["labels"]), t)
    raise ValueError(f"unknown event type {kind!r}")


# ---------------------------------------------------------------------------
# direct mapping


class TriggerMode(enum.Enum):
    SINGLE_TILT = "SingleTilt"
    DOUBLE_TILT = "DoubleTilt"

    @classmethod
    def parse(cls, name) -> "TriggerMode":
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for m in cls:
            if m.value.lower() == key:
                return m
        raise InvalidConfig(f"unknown trigger mode {name!r}")


class DirectDispatcher:
    """Excursion state machine for direct mapping.

    An excursion is a run of non-steady classifications between two steady
    ones; its gesture is the first classification of the run. Nothing is
    armed until the first Steady has been seen.

    SingleTilt fires on the first classification of every excursion.
    DoubleTilt fires when two consecutive excursions share a label and the
    second starts within ``pair_window_ms`` of the first; a mismatched or
    late excursion replaces the pending one. Repeated Steady classifications
    count as one return to steady.
    """

    def __init__(self, mode: TriggerMode = TriggerMode.SINGLE_TILT, pair_window_ms: float = 1500.0):
        self.mode = TriggerMode.parse(mode)
        self.pair_window_ms = pair_window_ms
        self.armed = False
        self.pending: tuple[DirectionLabel, int] | None = None  # (label, start t)

    def reset(self) -> None:
        self.armed = False
        self.pending = None

    def step(self, c: Classification, t: int = 0) -> DirectEvent | None:
        if c.label is STEADY:
            self.armed = True
            return None
        if not self.armed:
            return None
        self.armed = False
        if self.mode is TriggerMode.SINGLE_TILT:
            return DirectEvent(c.label, c.level, t)
        if (self.pending is not None and self.pending[0] is c.label
                and t - self.pending[1] <= self.pair_window_ms):
            self.pending = None
            return DirectEvent(c.label, c.level, t)
        self.pending = (c.label, t)
        return None


def direct_dispatch(classifications: Iterable[tuple[int, Classification]],
                    mode: TriggerMode = TriggerMode.SINGLE_TILT,
                    pair_window_ms: float = 1500.0) -> list[DirectEvent]:
    """Run a fresh :class:`DirectDispatcher` over ``(t, classification)`` pairs."""
    d = DirectDispatcher(mode, pair_window_ms)
    return [ev for t, c in classifications if (ev := d.step(c, t)) is not None]


# ---------------------------------------------------------------------------
# tilt sequences


class Phase(enum.Enum):
    IDLE = "Idle"
    BUILDING = "Building"


@dataclass(frozen=True)
class SequenceState:
    buffer: tuple[DirectionLabel, ...] = ()
    phase: Phase = Phase.IDLE


DEFAULT_MAX_SEQUENCE = 8


def sequence_step(state: SequenceState, c: Classification | DirectionLabel, t: int = 0,
                  max_len: int = DEFAULT_MAX_SEQUENCE):
    """Advance the sequence recorder by one classification.

    Returns ``(new_state, event)`` where event is a :class:`SequenceEvent`,
    a :class:`SequenceOverflow`, or None.
    """
    label = c.label if isinstance(c, Classification) else DirectionLabel.parse(c)
    if label is STEADY:
        if not state.buffer:
            return state, None
        return SequenceState(), SequenceEvent(state.buffer, t)
    if state.buffer and state.buffer[-1] is label:
        return state, None
    buf = state.buffer + (label,)
    if len(buf) > max_len:
        return SequenceState(), SequenceOverflow(buf, t)
    return SequenceState(buf, Phase.BUILDING), None


class SequenceTracker:
    def __init__(self, max_len: int = DEFAULT_MAX_SEQUENCE):
        self.max_len = max_len
        self.state = SequenceState()

    def step(self, c, t: int = 0):
        self.state, ev = sequence_step(self.state, c, t, self.max_len)
        return ev


# ---------------------------------------------------------------------------
# pointer movement


class PointerMethod(enum.Enum):
    ANGLE_DISPLACEMENT = "AngleDisplacement"
    THRESHOLD_SPEED = "ThresholdSpeed"

    @classmethod
    def parse(cls, name) -> "PointerMethod":
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for m in cls:
            if m.value.lower() == key:
                return m
        raise InvalidConfig(f"unknown pointer method {name!r}")


REFERENCE_WIDTH = 1024
REFERENCE_HEIGHT = 768


@dataclass(frozen=True)
class PointerConfig:
    """Cursor control settings.

    ``gain`` is pixels per degree beyond the dead zone per tick (angle
    method); ``speed_gain`` is pixels per g beyond the threshold per tick
    (threshold method). Both are normalized to a 1024x768 reference screen.
    """

    screen_w: int = 1024
    screen_h: int = 768
    gain: float = 0.5
    dead_zone_deg: float = 10.0
    method: PointerMethod = PointerMethod.ANGLE_DISPLACEMENT
    tick_ms: float = 20.0
    threshold_x: float = 0.15
    threshold_y: float = 0.15
    speed_gain: float = 40.0

    def __post_init__(self):
        object.__setattr__(self, "method", PointerMethod.parse(self.method))
        if not (self.screen_w > 0 and self.screen_h > 0):
            raise InvalidConfig("screen dimensions must be positive")
        if not (self.gain > 0 and math.isfinite(self.gain)):
            raise InvalidConfig("gain must be positive")
        if not 0 <= self.dead_zone_deg < 90:
            raise InvalidConfig("dead_zone_deg must be in [0, 90)")
        if not self.tick_ms > 0:
            raise InvalidConfig("tick_ms must be positive")
        if not (self.threshold_x >= 0 and self.threshold_y >= 0):
            raise InvalidConfig("thresholds must be >= 0")
        if not self.speed_gain > 0:
            raise InvalidConfig("speed_gain must be positive")

    def to_dict(self) -> dict:
        return {"screen_w": self.screen_w, "screen_h": self.screen_h, "gain": self.gain,
                "dead_zone_deg": self.dead_zone_deg, "method": self.method.value,
                "tick_ms": self.tick_ms, "threshold_x": self.threshold_x,
                "threshold_y": self.threshold_y, "speed_gain": self.speed_gain}

    @classmethod
    def from_dict(cls, d: dict) -> "PointerConfig":
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from None


def _sign(v: float) -> float:
    return (v > 0) - (v < 0)


def axis_angles(p) -> tuple[float, float]:
    """Per-axis tilt angles in degrees: atan(|ax| / |az|) and atan(|ay| / |az|)."""
    ax, ay, az = (float(v) for v in p)
    return math.degrees(math.atan2(abs(ax), abs(az))), math.degrees(math.atan2(abs(ay), abs(az)))


def pointer_displacement(p, cfg: PointerConfig) -> tuple[float, float]:
    """Unclamped cursor displacement for one tick in screen pixels.

    Right tilt (+ax) moves right (+dx); up tilt (+ay) moves up (-dy, screen
    y grows downward).
    """
    ax, ay, _ = (float(v) for v in p)
    sx = cfg.screen_w / REFERENCE_WIDTH
    sy = cfg.screen_h / REFERENCE_HEIGHT
    if cfg.method is PointerMethod.ANGLE_DISPLACEMENT:
        angx, angy = axis_angles(p)
        dx = cfg.gain * _sign(ax) * max(0.0, angx - cfg.dead_zone_deg) * sx
        dy = -cfg.gain * _sign(ay) * max(0.0, angy - cfg.dead_zone_deg) * sy
    else:
        dx = cfg.speed_gain * _sign(ax) * max(0.0, abs(ax) - cfg.threshold_x) * sx
        dy = -cfg.speed_gain * _sign(ay) * max(0.0, abs(ay) - cfg.threshold_y) * sy
    return dx + 0.0, dy + 0.0  # +0.0 folds -0.0


class PointerTracker:
    """Accumulates displacements into a cursor clamped to the screen.

    The cursor starts at the screen centre. :meth:`step` applies one tick;
    :meth:`feed` takes raw samples and ticks every ``tick_ms`` of trace time
    using the mean of the samples seen since the last tick.
    """

    def __init__(self, cfg: PointerConfig | None = None):
        self.cfg = cfg or PointerConfig()
        self.x = self.cfg.screen_w / 2.0
        self.y = self.cfg.screen_h / 2.0
        self._acc: list[tuple[float, float, float]] = []
        self._last_tick: int | None = None

    def _clamp(self, x: float, y: float) -> tuple[float, float]:
        return min(max(x, 0.0), self.cfg.screen_w - 1.0), min(max(y, 0.0), self.cfg.screen_h - 1.0)

    def step(self, p, t: int = 0) -> PointerEvent:
        vec = p.vec if hasattr(p, "vec") else p
        dx, dy = pointer_displacement(vec, self.cfg)
        nx, ny = self._clamp(self.x + dx, self.y + dy)
        ev = PointerEvent(nx - self.x, ny - self.y, t, nx, ny)
        self.x, self.y = nx, ny
        return ev

    def feed(self, s: AccelSample) -> PointerEvent | None:
        self._acc.append((s.ax, s.ay, s.az))
        if self._last_tick is None:
            self._last_tick = s.t
            return None
        if s.t - self._last_tick < self.cfg.tick_ms:
            return None
        self._last_tick = s.t
        mean = np.mean(self._acc, axis=0)
        self._acc.clear()
        return self.step(mean, s.t)


def pointer_step(p, cfg: PointerConfig, tracker: PointerTracker | None = None) -> PointerEvent:
    """One pointer tick; pass a tracker to keep the cursor across calls."""
    tracker = tracker or PointerTracker(cfg)
    return tracker.step(p)


# ---------------------------------------------------------------------------
# tap and shake clicks


@dataclass(frozen=True)
class ClickConfig:
    """Spike detector settings.

    A spike starts when consecutive samples differ by more than ``spike_g``
    and must come back within ``spike_g / 2`` of the pre-spike sample inside
    ``settle_ms``. ``shake_count`` alternating-sign spikes inside
    ``shake_window_ms`` make a shake.
    """

    spike_g: float = 0.8
    settle_ms: float = 100.0
    shake_count: int = 3
    shake_window_ms: float = 500.0

    def __post_init__(self):
        if not self.spike_g > 0:
            raise InvalidConfig("spike_g must be positive")
        if not (self.settle_ms > 0 and self.shake_window_ms > 0):
            raise InvalidConfig("time windows must be positive")
        if self.shake_count < 2:
            raise InvalidConfig("shake_count must be >= 2")


class TapDetector:
    """Streaming tap/shake detector over raw samples.

    Spikes are buffered until ``shake_window_ms`` has passed since the first
    one in the cluster, so a shake can swallow its constituent taps. Call
    :meth:`flush` at the end of a stream.
    """

    def __init__(self, cfg: ClickConfig | None = None):
        self.cfg = cfg or ClickConfig()
        self._prev: np.ndarray | None = None
        self._spike: tuple[int, np.ndarray, int] | None = None  # onset t, baseline, sign
        self._cluster: list[tuple[int, int]] = []  # (t, sign)

    def push(self, s: AccelSample) -> list[ClickEvent]:
        v = np.array([s.ax, s.ay, s.az])
        out = self._expire(s.t)
        if self._spike is not None:
            t0, base, sign = self._spike
            if math.dist(v, base) <= self.cfg.spike_g / 2:
                self._spike = None
                self._cluster.append((t0, sign))
            elif s.t - t0 > self.cfg.settle_ms:
                self._spike = None  # sustained change, not a spike
        elif self._prev is not None:
            jump = v - self._prev
            if float(np.linalg.norm(jump)) > self.cfg.spike_g:
                sign = 1 if jump[int(np.argmax(np.abs(jump)))] > 0 else -1
                self._spike = (s.t, self._prev, sign)
        if self._spike is None:
            self._prev = v
        return out

    def _expire(self, now: int) -> list[ClickEvent]:
        if self._cluster and now - self._cluster[0][0] > self.cfg.shake_window_ms:
            return self._close()
        return []

    def _close(self) -> list[ClickEvent]:
        cluster, self._cluster = self._cluster, []
        run = best = 1
        for (_, a), (_, b) in zip(cluster, cluster[1:]):
            run = run + 1 if a != b else 1
            best = max(best, run)
        if len(cluster) >= self.cfg.shake_count and best >= self.cfg.shake_count:
            return [ClickEvent(ClickKind.SHAKE, cluster[-1][0])]
        return [ClickEvent(ClickKind.TAP, t) for t, _ in cluster]

    def flush(self) -> list[ClickEvent]:
        return self._close() if self._cluster else []


def detect_tap(samples: Iterable[AccelSample], cfg: ClickConfig | None = None) -> list[ClickEvent]:
    det = TapDetector(cfg)
    out: list[ClickEvent] = []
    for s in samples:
        out.extend(det.push(s))
    out.extend(det.flush())
    return out
