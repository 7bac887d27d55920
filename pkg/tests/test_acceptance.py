"""Acceptance checks, one test per criterion.

Each test reports a ``criterion N: PASS|FAIL`` line in the terminal
summary (see conftest.py). Run directly with ``python tests/test_acceptance.py``.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from tiltgest.calibration import (CalibratedPoint, CalibrationSet, DirectionLabel as D,
                                  calibrate_steady, direction_vector, new_calibration, try_add_direction,
                                  virtual_border)
from tiltgest.classify import classify, tilt_angle
from tiltgest.errors import BorderViolation, DuplicateLabel
from tiltgest.mapping import (DirectDispatcher, PointerConfig, PointerMethod, PointerTracker, TriggerMode,
                              pointer_displacement)
from tiltgest.pipeline import Recognizer
from tiltgest.preprocess import detect_stable, window_stddev
from tiltgest.profiles import load_builtin
from tiltgest.trace_io import AccelSample, SynthSpec, from_arrays, synth_trace

from conftest import calibrated, script_trace

TILTS = list(D)[1:]


def _cli(*args) -> bytes:
    return subprocess.run([sys.executable, "-m", "tiltgest.cli", *args], check=True,
                          capture_output=True).stdout


# 1 -------------------------------------------------------------------------

def test_criterion_1_angle_identities():
    assert abs(tilt_angle((0, 0, 1)) - 0.0) <= 1e-9
    assert abs(tilt_angle((1, 0, 0)) - 90.0) <= 1e-9
    assert abs(tilt_angle((0.5, 0.5, math.sqrt(0.5))) - 45.0) <= 1e-9
    rng = np.random.default_rng(1)
    vs = rng.normal(0, 1, (10_000, 3))
    ks = 10.0 ** rng.uniform(-6, 6, 10_000)
    for v, k in zip(vs, ks):
        assert abs(tilt_angle(v * k) - tilt_angle(v)) <= 1e-9


# 2 -------------------------------------------------------------------------

def _oracle(steady, points, q, levels_enabled):
    """Exhaustive scan over plain tuples, with its own level rule."""
    best, best_d2 = ("Steady", 1), sum((a - b) ** 2 for a, b in zip(q, steady))
    for name, level, c in points:
        d2 = sum((a - b) ** 2 for a, b in zip(q, c))
        if d2 < best_d2:
            best, best_d2 = (name, level), d2
    name, level = best
    if name != "Steady" and levels_enabled and sum(1 for n, _, _ in points if n == name) == 1:
        r = math.sqrt(q[0] ** 2 + q[1] ** 2 + q[2] ** 2)
        ang = math.degrees(math.acos(q[2] / r))
        level = 3 if ang >= 65 else 2 if ang >= 40 else 1
    return name, level, math.sqrt(best_d2)


def test_criterion_2_classifier_oracle():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    for i in range(1000):
        n = int(rng.integers(1, 25))  # plus steady: at most 25 centroids
        lv = rng.integers(1, 4, n)
        pts, seen = [], set()
        for j in range(n):
            key = (TILTS[int(rng.integers(8))].value, int(lv[j]))
            if key not in seen:
                seen.add(key)
                pts.append((key[0], key[1], tuple(rng.normal(0, 1, 3))))
        steady = tuple(rng.normal(0, 1, 3))
        levels = bool(i % 2)
        cset = CalibrationSet(1e-9, steady, tuple(CalibratedPoint(D(a), b, c) for a, b, c in pts),
                              levels_enabled=levels)
        q = tuple(rng.normal(0, 1, 3))
        name, level, dist = _oracle(steady, pts, q, levels)
        c = classify(cset, q)
        assert (c.label.value, c.level) == (name, level)
        assert c.distance == pytest.approx(dist, rel=1e-12)
    assert time.perf_counter() - start < 5.0


# 3 -------------------------------------------------------------------------

def test_criterion_3_border_rule():
    rng = np.random.default_rng(3)
    for max_g in (0.5, 1.0, 1.5, 2.0, 3.0, 1 / 3, 7.25):
        for n in range(1, 33):
            assert virtual_border(max_g, n) == max_g / n
    for _ in range(300):
        max_g = float(rng.uniform(0.5, 3.0))
        n = int(rng.integers(1, 17))
        cset = calibrate_steady(rng.normal(0, 0.5, 3), new_calibration(n, max_g, levels_enabled=True))
        for _ in range(30):
            before = cset
            try:
                cset = try_add_direction(cset, TILTS[int(rng.integers(8))], int(rng.integers(1, 4)),
                                         rng.normal(0, 0.6, 3))
            except (BorderViolation, DuplicateLabel):
                assert cset is before
            cs = [c for _, _, c in cset.centroids()]
            for a in range(len(cs)):
                for b in range(a + 1, len(cs)):
                    assert math.dist(cs[a], cs[b]) > cset.virtual_border


# 4 -------------------------------------------------------------------------

def test_criterion_4_preprocessing():
    pose = (0.123, -0.456, 0.789)
    assert window_stddev([AccelSample(10 * i, *pose) for i in range(6)]) == 0.0
    tr = from_arrays(np.arange(40) * 10, np.tile(pose, (40, 1)))
    (sp,) = detect_stable(tr)
    assert sp.centroid == pose
    for seed in range(5):
        noisy = synth_trace(SynthSpec((0.0, 0.0, 1.0), 0.5, 10_000, 100.0, seed=seed))
        assert len(noisy) == 1000
        assert list(detect_stable(noisy)) == []


# 5 -------------------------------------------------------------------------

def _reachable(levels):
    cset = calibrated(TILTS, tilt=27.0, n=8, levels=levels)
    reached = set()
    for az in range(0, 360, 3):
        for tilt in range(0, 90):
            a, t = math.radians(az), math.radians(tilt)
            v = (math.sin(t) * math.cos(a), math.sin(t) * math.sin(a), math.cos(t))
            disp = DirectDispatcher(TriggerMode.SINGLE_TILT)
            disp.step(classify(cset, (0, 0, 1)))
            ev = disp.step(classify(cset, v))
            if ev is not None:
                reached.add((ev.label, ev.level))
    return reached


def test_criterion_5_gesture_space():
    reached = _reachable(True)
    assert len(reached) == 24
    assert reached == {(d, lv) for d in TILTS for lv in (1, 2, 3)}
    assert len(_reachable(False)) == 8


# 6 -------------------------------------------------------------------------

def _commands(outs):
    return [(o.command, o.mode) for o in outs if o.command is not None]


def _double(lab):
    return [("Steady", 600), (lab, 500), ("Steady", 500), (lab, 500), ("Steady", 600)]


def _single(lab):
    return [("Steady", 600), (lab, 500), ("Steady", 500)]


def _seq(a, b):
    return [("Steady", 600), (a, 500), (b, 500), ("Steady", 600)]


def test_criterion_6_table_goldens():
    cset = calibrated(TILTS, n=8)

    def replay(profile, segs, mode=None):
        rec = Recognizer(cset, load_builtin(profile))
        if mode:
            rec.mode = mode
        return rec, rec.run(script_trace(segs, sigma=0.01, seed=6))

    for lab, cmd in [("Right", "Next"), ("Left", "Previous"), ("Up", "Home"), ("Down", "End"),
                     ("DownRight", "Close")]:
        assert _commands(replay("slideshow", _double(lab))[1]) == [(cmd, "default")]

    for lab, cmd in [("Right", "Move right"), ("Left", "Move left"), ("Up", "Move up"),
                     ("Down", "Move down")]:
        rec, outs = replay("photobrowser", _single(lab))
        assert _commands(outs) == [(cmd, "browsing")] and rec.mode == "browsing"
    rec, outs = replay("photobrowser", _single("DownRight"))
    assert _commands(outs) == [("View picture", "browsing")] and rec.mode == "editing"

    for segs, cmd, after in [(_seq("Up", "Right"), "Increase brightness", "editing"),
                             (_seq("Up", "Left"), "Decrease brightness", "editing"),
                             (_single("Down"), "Black and white filter", "editing"),
                             (_single("Left"), "Close", "browsing")]:
        rec, outs = replay("photobrowser", segs, mode="editing")
        assert _commands(outs) == [(cmd, "editing")] and rec.mode == after

    for lab, cmd, axis, sign in [("Right", "Move right", "dx", 1), ("Left", "Move left", "dx", -1),
                                 ("Up", "Move up", "dy", -1), ("Down", "Move down", "dy", 1)]:
        _, outs = replay("flightsim", [(lab, 800, 30)])
        moves = [o for o in outs if o.event.type == "pointer"]
        assert moves and {o.command for o in moves} == {cmd}
        assert all(getattr(o.event, axis) * sign > 0 for o in moves)


# 7 -------------------------------------------------------------------------

def test_criterion_7_pointer_laws():
    for method in PointerMethod:
        cfg = PointerConfig(method=method)
        assert pointer_displacement((0.0, 0.0, 1.0), cfg) == (0.0, 0.0)
        tr = PointerTracker(cfg)
        ev = tr.step((0.0, 0.0, 1.0))
        assert (ev.dx, ev.dy) == (0, 0)

    cfg = PointerConfig()
    for label, axis, sign in [(D.RIGHT, 0, 1), (D.LEFT, 0, -1), (D.UP, 1, -1), (D.DOWN, 1, 1)]:
        mags = [sign * pointer_displacement(direction_vector(label, a), cfg)[axis]
                for a in np.arange(cfg.dead_zone_deg + 0.5, 89.5, 0.5)]
        assert all(m > 0 for m in mags)
        assert all(b > a for a, b in zip(mags, mags[1:]))

    rng = np.random.default_rng(7)
    for method in PointerMethod:
        cfg = PointerConfig(screen_w=1920, screen_h=1080, gain=3.0, method=method)
        tr = PointerTracker(cfg)
        w, h = cfg.screen_w - 1, cfg.screen_h - 1
        for p in rng.uniform(-1.5, 1.5, (500_000, 3)).tolist():
            ev = tr.step(p)
            assert 0 <= ev.x <= w and 0 <= ev.y <= h


# 8 -------------------------------------------------------------------------

def test_criterion_8_benchmark_trend():
    start = time.perf_counter()
    out = _cli("bench", "--targets", "4", "8", "12", "16", "--sigma", "0.08", "--trials", "500", "--seed", "0")
    elapsed = time.perf_counter() - start
    acc = {r["n_targets"]: r["accuracy"] for r in map(json.loads, out.decode().splitlines())}
    print(f"accuracy at sigma 0.08: {acc}, {elapsed:.1f} s")
    assert acc[4] >= acc[8] >= acc[12] >= acc[16]
    assert elapsed < 60.0
    (zero,) = map(json.loads, _cli("bench", "--targets", "4", "--sigma", "0", "--trials", "500").splitlines())
    assert zero["accuracy"] == 1.0


# 9 -------------------------------------------------------------------------

def test_criterion_9_determinism(tmp_path):
    synth = ["synth", "--script", "Steady:400,UpRight:500,Steady:400", "--sigma", "0.05",
             "--tremor", "0.02", "--seed", "123"]
    assert _cli(*synth) == _cli(*synth)
    assert _cli("synth", "--label", "Down", "--sigma", "0.1", "--seed", "5") == \
        _cli("synth", "--label", "Down", "--sigma", "0.1", "--seed", "5")
    bench = ["bench", "--targets", "4", "8", "12", "16", "--sigma", "0.1", "--trials", "100", "--seed", "9"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _cli(*bench, "--csv", str(a)) == _cli(*bench, "--csv", str(b))
    assert a.read_bytes() == b.read_bytes()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
