"""Calibration of the steady pose and tilt directions.

Calibrated centroids live in g-space. A new point is admitted only when its
distance to the steady centroid and to every other calibrated centroid is
strictly larger than the set's virtual border, ``max_g / n_directions``.
Sets are immutable; every operation returns a new one.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import (BorderViolation, DuplicateLabel, InvalidArgument, ParseError,
                     SteadyMissing, UnknownDirection)
from .preprocess import StablePoint


class DirectionLabel(enum.Enum):
    STEADY = "Steady"
    UP = "Up"
    DOWN = "Down"
    LEFT = "Left"
    RIGHT = "Right"
    UP_LEFT = "UpLeft"
    UP_RIGHT = "UpRight"
    DOWN_LEFT = "DownLeft"
    DOWN_RIGHT = "DownRight"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name) -> "DirectionLabel":
        """Accepts ``"DownRight"``, ``"down-right"``, ``"Down right"`` and so on."""
        if isinstance(name, cls):
            return name
        if not isinstance(name, str):
            raise UnknownDirection(name)
        key = name.replace("-", "").replace("_", "").replace(" ", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise UnknownDirection(name)


TILT_DIRECTIONS = tuple(d for d in DirectionLabel if d is not DirectionLabel.STEADY)

# azimuth in the sensor x/y plane, counter-clockwise from +x (Right)
AZIMUTH_DEG = {
    DirectionLabel.RIGHT: 0.0,
    DirectionLabel.UP_RIGHT: 45.0,
    DirectionLabel.UP: 90.0,
    DirectionLabel.UP_LEFT: 135.0,
    DirectionLabel.LEFT: 180.0,
    DirectionLabel.DOWN_LEFT: 225.0,
    DirectionLabel.DOWN: 270.0,
    DirectionLabel.DOWN_RIGHT: 315.0,
}

FOUR_DIRECTIONS = (DirectionLabel.UP, DirectionLabel.RIGHT, DirectionLabel.DOWN, DirectionLabel.LEFT)
EIGHT_DIRECTIONS = tuple(sorted(AZIMUTH_DEG, key=AZIMUTH_DEG.get))


def direction_vector(label: DirectionLabel, tilt_deg: float) -> np.ndarray:
    """Unit gravity vector seen by the sensor when tilted ``tilt_deg`` toward ``label``.

    Flat (screen up) is ``(0, 0, 1)``; a right tilt loads +x and an up
    tilt loads +y.
    """
    label = DirectionLabel.parse(label)
    th = math.radians(tilt_deg)
    if label is DirectionLabel.STEADY:
        return np.array([0.0, 0.0, 1.0])
    ph = math.radians(AZIMUTH_DEG[label])
    return np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])


@dataclass(frozen=True)
class CalibratedPoint:
    label: DirectionLabel
    level: int
    centroid: tuple[float, float, float]

    @property
    def vec(self) -> np.ndarray:
        return np.asarray(self.centroid, dtype=float)


@dataclass(frozen=True)
class CalibrationSet:
    virtual_border: float
    steady: tuple[float, float, float] | None = None
    points: tuple[CalibratedPoint, ...] = ()
    max_g: float = 1.0
    levels_enabled: bool = False

    def __post_init__(self):
        if not (self.virtual_border > 0 and math.isfinite(self.virtual_border)):
            raise InvalidArgument("virtual_border must be positive")
        if not (self.max_g > 0 and math.isfinite(self.max_g)):
            raise InvalidArgument("max_g must be positive")

    def centroids(self) -> list[tuple[DirectionLabel, int, np.ndarray]]:
        """All calibrated centroids, steady first, then in insertion order."""
        out = []
        if self.steady is not None:
            out.append((DirectionLabel.STEADY, 1, np.asarray(self.steady, dtype=float)))
        out.extend((p.label, p.level, p.vec) for p in self.points)
        return out

    def has(self, label: DirectionLabel, level: int = 1) -> bool:
        return any(p.label is label and p.level == level for p in self.points)

    def levels_of(self, label: DirectionLabel) -> set[int]:
        return {p.level for p in self.points if p.label is label}

    def check(self) -> None:
        """Raise :class:`BorderViolation` if any two centroids are too close."""
        cs = self.centroids()
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                d = math.dist(cs[i][2], cs[j][2])
                if d <= self.virtual_border:
                    raise BorderViolation(cs[i][0], cs[i][1], d, self.virtual_border)


def virtual_border(max_g: float, n_directions: int) -> float:
    if not (max_g > 0 and math.isfinite(max_g)):
        raise InvalidArgument("max_g must be positive")
    if isinstance(n_directions, bool) or int(n_directions) != n_directions or n_directions < 1:
        raise InvalidArgument("n_directions must be a positive integer")
    return max_g / n_directions


def new_calibration(n_directions: int, max_g: float = 1.0, levels_enabled: bool = False) -> CalibrationSet:
    """Empty set whose border is fixed from the declared direction count."""
    return CalibrationSet(virtual_border(max_g, n_directions), max_g=max_g, levels_enabled=levels_enabled)


def _vec(p) -> np.ndarray:
    v = p.vec if isinstance(p, StablePoint) else np.asarray(p, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise InvalidArgument("point must be a finite 3-vector")
    return v


def _tup(v: np.ndarray) -> tuple[float, float, float]:
    return tuple(float(x) for x in v)


def calibrate_steady(p, cset: CalibrationSet, recalibrate: bool = False) -> CalibrationSet:
    """Set the steady centroid from a stable point (or raw 3-vector).

    Replacing an existing steady point requires ``recalibrate=True``.
    """
    v = _vec(p)
    if cset.steady is not None and not recalibrate:
        raise InvalidArgument("steady state already calibrated; pass recalibrate=True")
    for q in cset.points:
        d = math.dist(v, q.vec)
        if d <= cset.virtual_border:
            raise BorderViolation(q.label, q.level, d, cset.virtual_border)
    return replace(cset, steady=_tup(v))


def try_add_direction(cset: CalibrationSet, label, level: int, p) -> CalibrationSet:
    label = DirectionLabel.parse(label)
    if label is DirectionLabel.STEADY:
        raise InvalidArgument("use calibrate_steady for the steady pose")
    if level not in (1, 2, 3):
        raise InvalidArgument("level must be 1, 2 or 3")
    if level != 1 and not cset.levels_enabled:
        raise InvalidArgument("levels are not enabled for this calibration set")
    if cset.steady is None:
        raise SteadyMissing()
    if cset.has(label, level):
        raise DuplicateLabel(label, level)
    v = _vec(p)
    nearest = min(cset.centroids(), key=lambda c: math.dist(v, c[2]))
    d = math.dist(v, nearest[2])
    if d <= cset.virtual_border:
        raise BorderViolation(nearest[0], nearest[1], d, cset.virtual_border)
    return replace(cset, points=cset.points + (CalibratedPoint(label, level, _tup(v)),))


# ---------------------------------------------------------------------------
# persistence


def calibration_to_dict(cset: CalibrationSet) -> dict:
    return {
        "steady": list(cset.steady) if cset.steady is not None else None,
        "max_g": cset.max_g,
        "virtual_border": cset.virtual_border,
        "levels_enabled": cset.levels_enabled,
        "points": [{"label": p.label.value, "level": p.level, "centroid": list(p.centroid)}
                   for p in cset.points],
    }


def _parse_vec(v, what: str) -> tuple[float, float, float]:
    if (not isinstance(v, list) or len(v) != 3
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) for x in v)):
        raise ParseError(f"{what} must be a list of three finite numbers")
    return tuple(float(x) for x in v)


def calibration_from_dict(d: dict) -> CalibrationSet:
    """Rebuild and re-validate a set; border conflicts raise on load."""
    if not isinstance(d, dict):
        raise ParseError("calibration must be a JSON object")
    try:
        border = float(d["virtual_border"])
        max_g = float(d.get("max_g", 1.0))
        raw_points = d.get("points", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad calibration file: {exc}") from None
    steady = d.get("steady")
    cset = CalibrationSet(border, max_g=max_g, levels_enabled=bool(d.get("levels_enabled", False)))
    if steady is not None:
        cset = calibrate_steady(_parse_vec(steady, "steady"), cset)
    for i, p in enumerate(raw_points):
        if not isinstance(p, dict) or "label" not in p or "centroid" not in p:
            raise ParseError(f"point {i} needs label and centroid")
        cset = try_add_direction(cset, DirectionLabel.parse(p["label"]), int(p.get("level", 1)),
                                 _parse_vec(p["centroid"], f"point {i} centroid"))
    return cset


def save_calibration(cset: CalibrationSet, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(calibration_to_dict(cset), f, indent=2)
        f.write("\n")


def load_calibration(path) -> CalibrationSet:
    try:
        with open(path, encoding="utf-8") as f:
            d = json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return calibration_from_dict(d)


def calibrate_poses(poses: Sequence[tuple[DirectionLabel, int, Sequence[float]]], steady=(0.0, 0.0, 1.0),
                    n_directions: int | None = None, max_g: float = 1.0,
                    levels_enabled: bool = False) -> CalibrationSet:
    """Convenience: build a whole set from known centroids in one go."""
    n = n_directions if n_directions is not None else max(1, len(poses))
    cset = calibrate_steady(steady, new_calibration(n, max_g, levels_enabled))
    for label, level, c in poses:
        cset = try_add_direction(cset, label, level, c)
    return cset
