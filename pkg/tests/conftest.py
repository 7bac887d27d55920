import numpy as np
import pytest

from tiltgest.calibration import (DirectionLabel as D, calibrate_steady, direction_vector, new_calibration,
                                  try_add_direction)
from tiltgest.trace_io import synth_keyframes

STEADY = np.array([0.0, 0.0, 1.0])


def script_trace(segments, *, tilt=40.0, ramp_ms=200.0, sigma=0.0, seed=0, rate_hz=100.0):
    """segments: list of (label, hold_ms) or (label, hold_ms, tilt_deg)."""
    keys = []
    t = 0.0
    for i, seg in enumerate(segments):
        label, hold = seg[0], seg[1]
        v = direction_vector(label, seg[2] if len(seg) > 2 else tilt)
        if i:
            t += ramp_ms
        keys.append((t, v))
        t += hold
        keys.append((t, v))
    return synth_keyframes(keys, noise_sigma=sigma, seed=seed, rate_hz=rate_hz)


def calibrated(labels, tilt=40.0, n=None, levels=False):
    cset = calibrate_steady(STEADY, new_calibration(n or len(labels), levels_enabled=levels))
    for lab in labels:
        cset = try_add_direction(cset, lab, 1, direction_vector(lab, tilt))
    return cset


@pytest.fixture
def five_way():
    return calibrated([D.RIGHT, D.LEFT, D.UP, D.DOWN, D.DOWN_RIGHT])


@pytest.fixture
def eight_way():
    return calibrated(list(D)[1:], n=8)


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.split("_")[2])):
        num, desc = name.split("_")[2], " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {num}: {_criteria[name]}  ({desc})")
