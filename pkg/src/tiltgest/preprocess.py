"""Stable-pose detection over a raw sample stream.

A window of ``window_size`` consecutive samples is *stable* when the
Euclidean norm of its per-axis population standard deviations is at most
``stddev_threshold``. A run of stable windows forms an episode; once an
episode has lasted ``dwell_ms`` the current window mean is emitted as a
:class:`StablePoint`, and nothing else is emitted until the episode ends.
An episode ends on an unstable window, or when the window mean drifts more
than ``2 * stddev_threshold`` from the mean of the episode's first window.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidConfig, WrongWindowLength
from .trace_io import AccelSample, Trace


@dataclass(frozen=True)
class StablePoint:
    centroid: tuple[float, float, float]
    t_start: int
    t_end: int

    @property
    def vec(self) -> np.ndarray:
        return np.asarray(self.centroid, dtype=float)

    def to_dict(self) -> dict:
        return {"t_start": self.t_start, "t_end": self.t_end, "centroid": list(self.centroid)}


@dataclass(frozen=True)
class PreprocessConfig:
    window_size: int = 6
    stddev_threshold: float = 0.05
    dwell_ms: float = 200.0

    def __post_init__(self):
        if not isinstance(self.window_size, int) or self.window_size < 2:
            raise InvalidConfig("window_size must be an integer >= 2")
        if not self.stddev_threshold > 0:
            raise InvalidConfig("stddev_threshold must be > 0")
        if not self.dwell_ms >= 0:
            raise InvalidConfig("dwell_ms must be >= 0")


def window_stddev(window: Sequence[AccelSample], window_size: int = 6) -> float:
    if len(window) != window_size:
        raise WrongWindowLength(len(window), window_size)
    xyz = np.array([(s.ax, s.ay, s.az) for s in window], dtype=float)
    return float(np.linalg.norm(_std(xyz, axis=0)))


def _mean(a: np.ndarray, axis: int) -> np.ndarray:
    # offset by the first sample so a window of identical samples averages exactly
    first = np.take(a, [0], axis=axis)
    return np.squeeze(first, axis=axis) + (a - first).mean(axis=axis)


def _std(a: np.ndarray, axis: int) -> np.ndarray:
    return (a - np.take(a, [0], axis=axis)).std(axis=axis)


class _Episodes:
    # shared episode bookkeeping for the streaming and batch paths

    def __init__(self, cfg: PreprocessConfig):
        self.cfg = cfg
        self.drift_limit = 2.0 * cfg.stddev_threshold
        self.anchor = None
        self.start = 0
        self.emitted = False

    def reset(self):
        self.anchor = None
        self.emitted = False

    def window(self, stable: bool, mean: np.ndarray, t0: int, t1: int) -> StablePoint | None:
        if not stable:
            self.reset()
            return None
        if self.anchor is not None and math.dist(mean, self.anchor) > self.drift_limit:
            self.reset()
        if self.anchor is None:
            self.anchor = mean
            self.start = t0
        if not self.emitted and t1 - self.start >= self.cfg.dwell_ms:
            self.emitted = True
            return StablePoint(tuple(float(v) for v in mean), int(t0), int(t1))
        return None


class StableDetector:
    """Streaming form: feed samples one by one with :meth:`push`.

    Single-consumer; keep one instance per stream.
    """

    def __init__(self, cfg: PreprocessConfig | None = None):
        self.cfg = cfg or PreprocessConfig()
        self._buf: deque[AccelSample] = deque(maxlen=self.cfg.window_size)
        self._ep = _Episodes(self.cfg)

    def reset(self) -> None:
        self._buf.clear()
        self._ep.reset()

    def push(self, s: AccelSample) -> StablePoint | None:
        self._buf.append(s)
        if len(self._buf) < self.cfg.window_size:
            return None
        xyz = np.array([(b.ax, b.ay, b.az) for b in self._buf], dtype=float)
        sd = float(np.linalg.norm(_std(xyz, axis=0)))
        return self._ep.window(sd <= self.cfg.stddev_threshold, _mean(xyz, axis=0),
                               self._buf[0].t, self._buf[-1].t)


def window_stats(xyz: np.ndarray, window_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Means and combined stddevs of every full window, vectorized."""
    xyz = np.asarray(xyz, dtype=float)
    if len(xyz) < window_size:
        return np.empty((0, 3)), np.empty(0)
    win = sliding_window_view(xyz, window_size, axis=0)  # (n_win, 3, w)
    return _mean(win, axis=2), np.linalg.norm(_std(win, axis=2), axis=1)


def detect_stable(samples: Iterable[AccelSample] | Trace, cfg: PreprocessConfig | None = None) -> Iterator[StablePoint]:
    """Batch form of :class:`StableDetector`; yields the same points."""
    cfg = cfg or PreprocessConfig()
    samples = list(samples)
    if len(samples) < cfg.window_size:
        return
    t = np.array([s.t for s in samples], dtype=np.int64)
    xyz = np.array([(s.ax, s.ay, s.az) for s in samples], dtype=float)
    means, sds = window_stats(xyz, cfg.window_size)
    stable = sds <= cfg.stddev_threshold
    ep = _Episodes(cfg)
    w = cfg.window_size
    for i in range(len(means)):
        p = ep.window(bool(stable[i]), means[i], int(t[i]), int(t[i + w - 1]))
        if p is not None:
            yield p
