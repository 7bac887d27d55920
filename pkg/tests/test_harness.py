import csv
import io
import json

import numpy as np
import pytest

from tiltgest.calibration import DirectionLabel as D, direction_vector
from tiltgest.classify import classify
from tiltgest.errors import CalibrationFailed, InvalidArgument
from tiltgest.harness import (CSV_COLUMNS, EngineConfig, ExcursionModel, TargetSession, aimed_pose,
                              auto_calibrate, excursion_trace, run_target_session, run_trial, target_layout)
from tiltgest.preprocess import detect_stable


@pytest.mark.parametrize("n", [4, 8, 12, 16])
def test_layout_sizes_are_distinct_targets(n):
    lay = target_layout(n)
    assert len(lay) == n == len(set(lay))


@pytest.mark.parametrize("n", [0, 5, 6, 24])
def test_rejects_other_target_counts(n):
    with pytest.raises(InvalidArgument):
        TargetSession(n)


def test_rejects_bad_session_fields():
    with pytest.raises(InvalidArgument):
        TargetSession(4, trials=0)
    with pytest.raises(InvalidArgument):
        TargetSession(4, noise_sigma=-0.1)


@pytest.mark.parametrize("n", [4, 8, 12, 16])
def test_calibration_covers_targets(n):
    cset = auto_calibrate(n)
    cfg = EngineConfig()
    for label, level in target_layout(n):
        c = classify(cset, direction_vector(label, cfg.level1_tilt_deg if level == 1 else cfg.level2_tilt_deg),
                     cfg.boundaries)
        assert (c.label, c.level) == (label, level)


def test_calibration_fails_when_targets_crowd_steady():
    with pytest.raises(CalibrationFailed):
        auto_calibrate(16, EngineConfig(level1_tilt_deg=2.0))


def test_noiseless_four_targets_are_perfect():
    r = run_target_session(TargetSession(4, trials=100, noise_sigma=0.0, seed=3))
    assert r.accuracy == 1.0 and r.errors == 0


@pytest.mark.parametrize("n", [8, 12, 16])
def test_noiseless_sessions_are_perfect(n):
    assert run_target_session(TargetSession(n, trials=60, seed=1)).accuracy == 1.0


def test_excursion_yields_steady_target_steady():
    cfg = EngineConfig()
    cset = auto_calibrate(8, cfg)
    tr = excursion_trace(direction_vector(D.UP_LEFT, 32), cfg, 0.0, 0)
    labels = [classify(cset, p, cfg.boundaries).label for p in detect_stable(tr, cfg.preprocess)]
    assert labels == [D.STEADY, D.UP_LEFT, D.STEADY]


def test_aim_error_is_zero_at_zero_sigma():
    rng = np.random.default_rng(0)
    assert np.array_equal(aimed_pose(D.RIGHT, 1, EngineConfig(), 0.0, rng), direction_vector(D.RIGHT, 32))


def test_aim_error_grows_with_amplitude():
    cfg = EngineConfig()

    def spread(level):
        rng = np.random.default_rng(5)
        v0 = direction_vector(D.UP, cfg.level1_tilt_deg if level == 1 else cfg.level2_tilt_deg)
        return np.mean([np.linalg.norm(aimed_pose(D.UP, level, cfg, 0.05, rng) - v0) for _ in range(2000)])

    assert spread(2) > spread(1)


def test_trial_time_measured_from_departure():
    cfg = EngineConfig()
    hit, dt = run_trial(auto_calibrate(4, cfg), (D.RIGHT, 1), cfg, 0.0, 0)
    m = cfg.excursion
    assert hit
    assert m.ramp_ms < dt <= m.ramp_ms + m.hold_ms


def test_counts_add_up():
    r = run_target_session(TargetSession(16, trials=200, noise_sigma=0.1, seed=2))
    assert r.hits + r.errors == r.trials == 200
    assert r.accuracy == pytest.approx(r.hits / 200)


def test_session_is_deterministic():
    s = TargetSession(12, trials=80, noise_sigma=0.08, seed=11)
    assert run_target_session(s).to_json() == run_target_session(s).to_json()


def test_seed_changes_outcome():
    a = run_target_session(TargetSession(16, trials=200, noise_sigma=0.1, seed=1))
    b = run_target_session(TargetSession(16, trials=200, noise_sigma=0.1, seed=2))
    assert a != b


def test_accuracy_falls_with_noise():
    accs = [run_target_session(TargetSession(8, trials=500, noise_sigma=s, seed=4)).accuracy
            for s in (0.0, 0.05, 0.08, 0.11)]
    assert accs[0] == 1.0
    for hi, lo in zip(accs, accs[1:]):
        assert lo <= hi + 0.02
    assert accs[-1] < accs[0]


def test_tighter_aim_is_more_accurate():
    loose = EngineConfig(excursion=ExcursionModel(aim_scale=3.0))
    a = run_target_session(TargetSession(16, trials=300, noise_sigma=0.08, seed=0))
    b = run_target_session(TargetSession(16, trials=300, noise_sigma=0.08, seed=0), loose)
    assert b.accuracy < a.accuracy


def test_json_and_csv_rows():
    r = run_target_session(TargetSession(4, trials=10, noise_sigma=0.02, seed=0))
    d = json.loads(r.to_json())
    assert list(d) == list(CSV_COLUMNS)
    rows = list(csv.reader(io.StringIO(r.csv_row(header=True))))
    assert rows[0] == list(CSV_COLUMNS)
    assert rows[1][0] == "4" and int(rows[1][3]) + int(rows[1][4]) == 10
