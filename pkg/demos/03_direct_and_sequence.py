"""Direct gestures and sequences through the recognizer.

The slideshow profile wants double tilts, the photo browser reacts to single
tilts and, in its editing mode, to two-step sequences.
"""

import numpy as np

from tiltgest.calibration import DirectionLabel as D, calibrate_poses, direction_vector
from tiltgest.pipeline import Recognizer
from tiltgest.profiles import load_builtin
from tiltgest.trace_io import synth_keyframes

cset = calibrate_poses([(d, 1, direction_vector(d, 40)) for d in list(D)[1:]])


def script(*segments, ramp=200):
    keys, t = [], 0.0
    for i, (name, hold) in enumerate(segments):
        v = np.array([0.0, 0.0, 1.0]) if name == "Steady" else direction_vector(D.parse(name), 40)
        if i:
            t += ramp
        keys += [(t, v), (t + hold, v)]
        t += hold
    return synth_keyframes(keys, noise_sigma=0.01, seed=3)


double_right = script(("Steady", 600), ("Right", 500), ("Steady", 500), ("Right", 500), ("Steady", 600))
for out in Recognizer(cset, load_builtin("slideshow")).run(double_right):
    print("slideshow:", out.to_dict())

session = script(("Steady", 600), ("DownRight", 500), ("Steady", 500),
                 ("Up", 500), ("Right", 500), ("Steady", 500),
                 ("Left", 500), ("Steady", 600))
rec = Recognizer(cset, load_builtin("photobrowser"))
for out in rec.run(session):
    print("photobrowser:", out.to_dict())
print("final mode:", rec.mode)
