"""Accelerometer traces: JSON Lines I/O and synthetic generation.

A trace file holds one JSON object per line::

    {"rate_hz": 100.0}
    {"t":0,"ax":0.0,"ay":0.0,"az":1.0}
    {"t":10,"ax":0.01,"ay":-0.02,"az":0.99}

The optional ``rate_hz`` header must be the first record. Lines starting
with ``#`` and blank lines are ignored. Units are g (gravity = 1.0) and
timestamps are integer milliseconds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyTrace, InvalidSpec, MalformedRecord, NonMonotoneTimestamp

DEFAULT_RATE_HZ = 100.0
TREMOR_HZ = 8.0

_SAMPLE_KEYS = {"t", "ax", "ay", "az"}


@dataclass(frozen=True)
class AccelSample:
    t: int
    ax: float
    ay: float
    az: float

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.ax, self.ay, self.az])


@dataclass(frozen=True)
class Trace:
    samples: tuple[AccelSample, ...]
    rate_hz: float = DEFAULT_RATE_HZ

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=np.int64)

    def xyz(self) -> np.ndarray:
        """Samples as an ``(n, 3)`` float array."""
        if not self.samples:
            return np.empty((0, 3))
        return np.array([(s.ax, s.ay, s.az) for s in self.samples], dtype=float)


@dataclass(frozen=True)
class SynthSpec:
    direction: tuple[float, float, float]
    noise_sigma: float = 0.0
    duration_ms: float = 1000.0
    rate_hz: float = DEFAULT_RATE_HZ
    tremor_amp: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        d = np.asarray(self.direction, dtype=float)
        if d.shape != (3,) or not np.all(np.isfinite(d)):
            raise InvalidSpec("direction", "must be a finite 3-vector")
        if abs(float(np.linalg.norm(d)) - 1.0) > 1e-9:
            raise InvalidSpec("direction", "must have unit length")
        if not (self.noise_sigma >= 0 and math.isfinite(self.noise_sigma)):
            raise InvalidSpec("noise_sigma", "must be >= 0")
        if not (self.duration_ms > 0 and math.isfinite(self.duration_ms)):
            raise InvalidSpec("duration_ms", "must be positive")
        if not (self.rate_hz > 0 and math.isfinite(self.rate_hz)):
            raise InvalidSpec("rate_hz", "must be positive")
        if not (self.tremor_amp >= 0 and math.isfinite(self.tremor_amp)):
            raise InvalidSpec("tremor_amp", "must be >= 0")


# ---------------------------------------------------------------------------
# parsing / serialization


def _parse_sample(obj, lineno: int) -> AccelSample:
    if not isinstance(obj, dict):
        raise MalformedRecord(lineno, "record is not an object")
    keys = set(obj)
    if keys != _SAMPLE_KEYS:
        missing = _SAMPLE_KEYS - keys
        extra = keys - _SAMPLE_KEYS
        reason = f"missing {sorted(missing)}" if missing else f"unexpected {sorted(extra)}"
        raise MalformedRecord(lineno, reason)
    t = obj["t"]
    if isinstance(t, bool) or not isinstance(t, int) or t < 0:
        raise MalformedRecord(lineno, "t must be a non-negative integer")
    vals = []
    for k in ("ax", "ay", "az"):
        v = obj[k]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise MalformedRecord(lineno, f"{k} must be a finite number")
        vals.append(float(v))
    return AccelSample(t, *vals)


def parse_trace(lines: Iterable[str]) -> Trace:
    """Parse JSON Lines text into a :class:`Trace`.

    Any bad record rejects the whole input. Line numbers in errors are
    1-based physical line numbers, comments and blanks included.
    """
    samples: list[AccelSample] = []
    rate = DEFAULT_RATE_HZ
    seen_record = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(lineno, exc.msg) from None
        if not seen_record and isinstance(obj, dict) and set(obj) == {"rate_hz"}:
            r = obj["rate_hz"]
            if isinstance(r, bool) or not isinstance(r, (int, float)) or not (0 < r < math.inf):
                raise MalformedRecord(lineno, "rate_hz must be a positive number")
            rate = float(r)
            seen_record = True
            continue
        seen_record = True
        s = _parse_sample(obj, lineno)
        if samples and s.t < samples[-1].t:
            raise NonMonotoneTimestamp(lineno)
        samples.append(s)
    if not samples:
        raise EmptyTrace()
    return Trace(tuple(samples), rate)


def sample_to_json(s: AccelSample) -> str:
    return json.dumps({"t": s.t, "ax": s.ax, "ay": s.ay, "az": s.az}, separators=(",", ":"))


def serialize_trace(trace: Trace) -> str:
    """Canonical text form; ``parse_trace`` inverts it exactly."""
    out = [json.dumps({"rate_hz": float(trace.rate_hz)}, separators=(",", ":"))]
    out.extend(sample_to_json(s) for s in trace.samples)
    return "\n".join(out) + "\n"


def read_trace(path) -> Trace:
    with open(path, encoding="utf-8") as f:
        return parse_trace(f)


def write_trace(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_trace(trace))


def from_arrays(times: Sequence[int], xyz, rate_hz: float = DEFAULT_RATE_HZ) -> Trace:
    xyz = np.asarray(xyz, dtype=float)
    return Trace(
        tuple(AccelSample(int(t), float(x), float(y), float(z)) for t, (x, y, z) in zip(times, xyz)),
        float(rate_hz),
    )


# ---------------------------------------------------------------------------
# synthesis


def sample_count(duration_ms: float, rate_hz: float) -> int:
    return math.floor(duration_ms / 1000.0 * rate_hz)


def _timestamps(n: int, rate_hz: float, t0: int = 0) -> np.ndarray:
    return t0 + np.floor(np.arange(n) * (1000.0 / rate_hz) + 0.5).astype(np.int64)


def _add_noise(clean: np.ndarray, times: np.ndarray, sigma: float, tremor_amp: float,
               rng: np.random.Generator) -> np.ndarray:
    out = clean.copy()
    if tremor_amp > 0:
        phase = rng.uniform(0.0, 2 * math.pi, size=3)
        out += tremor_amp * np.sin(2 * math.pi * TREMOR_HZ * times[:, None] / 1000.0 + phase)
    if sigma > 0:
        out += rng.normal(0.0, sigma, size=out.shape)
    return out


def synth_trace(spec: SynthSpec) -> Trace:
    """Hold a single orientation for ``spec.duration_ms``.

    Gaussian noise and an 8 Hz tremor sinusoid (random phase per axis) are
    added on top of the unit direction.
    """
    spec.validate()
    n = sample_count(spec.duration_ms, spec.rate_hz)
    rng = np.random.default_rng(spec.seed)
    times = _timestamps(n, spec.rate_hz)
    clean = np.tile(np.asarray(spec.direction, dtype=float), (n, 1))
    return from_arrays(times, _add_noise(clean, times, spec.noise_sigma, spec.tremor_amp, rng), spec.rate_hz)


def _nlerp(a: np.ndarray, b: np.ndarray, w: np.ndarray) -> np.ndarray:
    v = (1.0 - w)[:, None] * a + w[:, None] * b
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def synth_keyframes(keyframes: Sequence[tuple[float, Sequence[float]]], *, noise_sigma: float = 0.0,
                    rate_hz: float = DEFAULT_RATE_HZ, tremor_amp: float = 0.0, seed: int = 0,
                    t0: int = 0) -> Trace:
    """Piecewise path through unit orientations.

    ``keyframes`` is a list of ``(time_ms, direction)``; between keyframes the
    orientation moves along the normalized linear interpolation, so the
    clean signal always has magnitude 1 g. Duration is the last keyframe time.
    """
    if len(keyframes) < 1:
        raise InvalidSpec("keyframes", "need at least one keyframe")
    kt = np.array([k[0] for k in keyframes], dtype=float)
    kd = np.array([k[1] for k in keyframes], dtype=float)
    if kd.ndim != 2 or kd.shape[1] != 3:
        raise InvalidSpec("keyframes", "directions must be 3-vectors")
    if np.any(np.diff(kt) < 0) or kt[0] < 0:
        raise InvalidSpec("keyframes", "times must be non-negative and non-decreasing")
    norms = np.linalg.norm(kd, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise InvalidSpec("keyframes", "directions must have unit length")
    if noise_sigma < 0:
        raise InvalidSpec("noise_sigma", "must be >= 0")
    if tremor_amp < 0:
        raise InvalidSpec("tremor_amp", "must be >= 0")
    if not rate_hz > 0:
        raise InvalidSpec("rate_hz", "must be positive")

    n = sample_count(kt[-1], rate_hz)
    rel = np.arange(n) * (1000.0 / rate_hz)
    clean = np.empty((n, 3))
    seg = np.clip(np.searchsorted(kt, rel, side="right") - 1, 0, len(kt) - 1)
    for i in range(len(kt)):
        m = seg == i
        if not m.any():
            continue
        if i == len(kt) - 1 or kt[i + 1] == kt[i]:
            clean[m] = kd[i]
        else:
            w = (rel[m] - kt[i]) / (kt[i + 1] - kt[i])
            clean[m] = _nlerp(kd[i], kd[i + 1], w)
    rng = np.random.default_rng(seed)
    times = _timestamps(n, rate_hz, t0)
    return from_arrays(times, _add_noise(clean, times - t0, noise_sigma, tremor_amp, rng), rate_hz)


def concat_traces(traces: Sequence[Trace], gap_ms: int | None = None) -> Trace:
    """Join traces end to end, shifting each so timestamps keep increasing.

    Each trace starts one nominal sample period (or ``gap_ms``) after the
    previous one ends.
    """
    if not traces:
        raise EmptyTrace()
    rate = traces[0].rate_hz
    step = gap_ms if gap_ms is not None else int(round(1000.0 / rate))
    out: list[AccelSample] = []
    for tr in traces:
        if not tr.samples:
            continue
        shift = 0 if not out else out[-1].t + step - tr.samples[0].t
        out.extend(AccelSample(s.t + shift, s.ax, s.ay, s.az) for s in tr.samples)
    if not out:
        raise EmptyTrace()
    return Trace(tuple(out), rate)
