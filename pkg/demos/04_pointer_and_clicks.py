"""Pointer movement and tap clicks.

Tilting past the dead zone moves the cursor, faster the further you tilt.
A sharp spike in the readings is a tap; a few alternating spikes are a shake.
"""

import numpy as np

from tiltgest.calibration import DirectionLabel as D, direction_vector
from tiltgest.mapping import PointerConfig, PointerTracker, detect_tap, pointer_displacement
from tiltgest.trace_io import AccelSample

cfg = PointerConfig(screen_w=1920, screen_h=1080)
for tilt in (5, 10, 20, 40, 60):
    dx, dy = pointer_displacement(direction_vector(D.RIGHT, tilt), cfg)
    print("right tilt %2d deg -> dx %6.2f px per tick" % (tilt, dx))

# Hold a down-left tilt: the cursor runs into the corner and stays there.
tracker = PointerTracker(cfg)
v = direction_vector(D.DOWN_LEFT, 50)
for _ in range(200):
    ev = tracker.step(v)
print("cursor after 200 ticks:", (ev.x, ev.y))

# One spike is a tap, four alternating ones are a shake.
flat = [AccelSample(10 * i, 0.0, 0.0, 1.0) for i in range(100)]
tap = list(flat)
tap[30] = AccelSample(300, 0.0, 0.0, -0.5)
print("tap:", [e.to_dict() for e in detect_tap(tap)])
shake = list(flat)
for k, t in enumerate((30, 40, 50, 60)):
    shake[t] = AccelSample(10 * t, 1.5 if k % 2 == 0 else -1.5, 0.0, 1.0)
print("shake:", [e.to_dict() for e in detect_tap(shake)])
