"""Minimum-distance classification of stable points and tilt levels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calibration import CalibrationSet, DirectionLabel
from .errors import EmptySet, InvalidConfig, ZeroVector
from .preprocess import StablePoint


def tilt_angle(p) -> float:
    """Angle in degrees between the sensed gravity vector and the +z axis.

    ``atan(sqrt(x^2 + y^2) / z)`` with the quadrant taken from the sign of
    ``z``, so the result covers [0, 180] and upside-down poses stay defined.
    """
    x, y, z = (float(v) for v in (p.vec if isinstance(p, StablePoint) else p))
    if x == 0.0 and y == 0.0 and z == 0.0:
        raise ZeroVector()
    return math.degrees(math.atan2(math.hypot(x, y), z))


@dataclass(frozen=True)
class LevelBoundaries:
    dead_zone_deg: float = 15.0
    l1_max_deg: float = 40.0
    l2_max_deg: float = 65.0

    def __post_init__(self):
        if not 0 < self.dead_zone_deg < self.l1_max_deg < self.l2_max_deg < 90:
            raise InvalidConfig("level boundaries must satisfy 0 < dead zone < l1 < l2 < 90")


def quantize_level(angle: float, b: LevelBoundaries | None = None) -> int:
    """0 inside the dead zone, otherwise the tilt level 1..3."""
    b = b or LevelBoundaries()
    if angle <= b.dead_zone_deg:
        return 0
    if angle <= b.l1_max_deg:
        return 1
    if angle <= b.l2_max_deg:
        return 2
    return 3


@dataclass(frozen=True)
class Classification:
    label: DirectionLabel
    level: int
    distance: float
    angle: float

    def to_dict(self) -> dict:
        return {"label": self.label.value, "level": self.level,
                "distance": self.distance, "angle": self.angle}


def classify(cset: CalibrationSet, p, boundaries: LevelBoundaries | None = None) -> Classification:
    """Nearest calibrated centroid wins; ties go to steady, then insertion order.

    With levels enabled and only one calibrated level for the winning
    direction, the level comes from quantizing the query's tilt angle;
    explicitly calibrated per-level centroids are used as-is.
    """
    if cset.steady is None or not cset.points:
        raise EmptySet()
    v = p.vec if isinstance(p, StablePoint) else np.asarray(p, dtype=float)
    best = None
    best_d = math.inf
    for label, level, c in cset.centroids():
        d = math.dist(v, c)
        if d < best_d:
            best, best_d = (label, level), d
    label, level = best
    try:
        angle = tilt_angle(v)
    except ZeroVector:
        angle = 0.0
    if label is DirectionLabel.STEADY:
        level = 1
    elif cset.levels_enabled and len(cset.levels_of(label)) == 1:
        level = max(1, quantize_level(angle, boundaries))
    return Classification(label, level, best_d, angle)
