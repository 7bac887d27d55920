"""Synthetic traces and stable-point detection.

A trace is a list of accelerometer samples in g. Holding the device still
gives windows with almost no spread, and those windows become stable points.
"""

import numpy as np

from tiltgest.calibration import DirectionLabel, direction_vector
from tiltgest.preprocess import PreprocessConfig, detect_stable, window_stats
from tiltgest.trace_io import serialize_trace, synth_keyframes

# Flat for half a second, tilt right for half a second, back to flat.
flat = np.array([0.0, 0.0, 1.0])
right = direction_vector(DirectionLabel.RIGHT, 40)
keys = [(0, flat), (500, flat), (700, right), (1200, right), (1400, flat), (1900, flat)]
trace = synth_keyframes(keys, noise_sigma=0.01, seed=1)
print(len(trace), "samples at", trace.rate_hz, "Hz")
print(serialize_trace(trace).splitlines()[:3])

# Per-window spread: small while holding, large during the ramps.
means, stds = window_stats(trace.xyz(), 6)
print("window stddev min/max: %.4f / %.4f" % (stds.min(), stds.max()))

# Stable points with the default settings (6 samples, 0.05 g, 200 ms dwell).
for p in detect_stable(trace):
    print("stable %5d..%5d ms  centroid %s" % (p.t_start, p.t_end, np.round(p.vec, 3)))

# A much stricter threshold rejects the same noisy holds.
strict = PreprocessConfig(stddev_threshold=0.001)
print("with 0.001 g threshold:", len(list(detect_stable(trace, strict))), "points")
