"""Calibration and nearest-centroid classification.

Each calibrated pose must sit farther than the virtual border from every
other pose, where the border is the maximum reading divided by the number of
directions. Classification picks the closest calibrated pose.
"""

from tiltgest.calibration import (DirectionLabel as D, calibrate_steady, direction_vector, new_calibration,
                                  try_add_direction)
from tiltgest.classify import classify, quantize_level, tilt_angle
from tiltgest.errors import BorderViolation

cset = new_calibration(8, max_g=1.0, levels_enabled=True)
print("virtual border:", cset.virtual_border)
cset = calibrate_steady((0.0, 0.0, 1.0), cset)
for label in list(D)[1:]:
    cset = try_add_direction(cset, label, 1, direction_vector(label, 30))
print("calibrated:", [p.label.value for p in cset.points])

# A second pose too close to an existing one is refused.
try:
    try_add_direction(cset, D.RIGHT, 2, direction_vector(D.RIGHT, 33))
except BorderViolation as exc:
    print("refused:", exc)

# The tilt angle picks the level when only one pose per direction is known.
for tilt in (10, 25, 50, 75):
    v = direction_vector(D.UP_LEFT, tilt)
    c = classify(cset, v)
    print("UpLeft at %2d deg -> %-8s level %d  (angle %.1f, quantized %d)"
          % (tilt, c.label.value, c.level, tilt_angle(v), quantize_level(tilt_angle(v))))
