import math
import statistics

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tiltgest.errors import InvalidConfig, WrongWindowLength
from tiltgest.preprocess import PreprocessConfig, StableDetector, detect_stable, window_stddev
from tiltgest.trace_io import AccelSample, SynthSpec, concat_traces, from_arrays, synth_trace


def S(t, x, y, z):
    return AccelSample(t, x, y, z)


def test_identical_window_is_zero():
    assert window_stddev([S(i * 10, 0.0, 0.0, 1.0) for i in range(6)]) == 0.0
    assert window_stddev([S(i, 0.1, 0.3, 0.7) for i in range(6)]) == 0.0


def test_plus_minus_one():
    w = [S(i, x, 0, 0) for i, x in enumerate([1, 1, 1, -1, -1, -1])]
    assert window_stddev(w) == pytest.approx(1.0, abs=1e-15)


def test_wrong_length():
    with pytest.raises(WrongWindowLength):
        window_stddev([S(i, 0, 0, 1) for i in range(5)], 6)


# milli-g grid keeps squared deviations clear of float underflow
vals = st.integers(-4000, 4000).map(lambda v: v / 1000)


@given(st.lists(st.tuples(vals, vals, vals), min_size=6, max_size=6))
def test_stddev_matches_pstdev(rows):
    w = [S(i, *r) for i, r in enumerate(rows)]
    oracle = math.hypot(*(statistics.pstdev([r[k] for r in rows]) for k in range(3)))
    assert window_stddev(w) == pytest.approx(oracle, rel=1e-9, abs=1e-12)
    assert (window_stddev(w) == 0.0) == (len(set(rows)) == 1)


def test_config_validation():
    for kw in (dict(window_size=1), dict(stddev_threshold=0), dict(dwell_ms=-1)):
        with pytest.raises(InvalidConfig):
            PreprocessConfig(**kw)


def test_one_stable_episode():
    tr = synth_trace(SynthSpec((0.0, 0.0, 1.0), 0.0, 1000, 100))
    pts = list(detect_stable(tr))
    assert len(pts) == 1
    assert pts[0].centroid == (0.0, 0.0, 1.0)


def test_white_noise_never_stable():
    tr = synth_trace(SynthSpec((0.0, 0.0, 1.0), 0.5, 10_000, 100, seed=2))
    assert list(detect_stable(tr)) == []


def test_two_poses():
    a = synth_trace(SynthSpec((0.0, 0.0, 1.0), 0.01, 500, 100, seed=1))
    b = synth_trace(SynthSpec((1.0, 0.0, 0.0), 0.01, 500, 100, seed=2))
    pts = list(detect_stable(concat_traces([a, b])))
    assert len(pts) == 2
    assert np.allclose(pts[0].vec, [0, 0, 1], atol=0.02)
    assert np.allclose(pts[1].vec, [1, 0, 0], atol=0.02)


def test_dwell_is_respected():
    tr = synth_trace(SynthSpec((0.0, 0.0, 1.0), 0.0, 1000, 100))
    (p,) = detect_stable(tr, PreprocessConfig(dwell_ms=200))
    assert p.t_end == 200  # first window ends at 50, held until 200
    (p,) = detect_stable(tr, PreprocessConfig(dwell_ms=0))
    assert (p.t_start, p.t_end) == (0, 50)
    assert list(detect_stable(tr, PreprocessConfig(dwell_ms=2000))) == []


def test_short_stream():
    assert list(detect_stable([S(0, 0, 0, 1)] * 3)) == []
    assert list(detect_stable([])) == []


def test_drift_splits_episode():
    # slow ramp: every window is stable but the pose wanders far from the first centroid
    n = 300
    ang = np.linspace(0, math.pi / 2, n)
    xyz = np.stack([np.sin(ang), np.zeros(n), np.cos(ang)], axis=1)
    tr = from_arrays(np.arange(n) * 10, xyz)
    cfg = PreprocessConfig(stddev_threshold=0.05, dwell_ms=200)
    pts = list(detect_stable(tr, cfg))
    assert len(pts) > 1
    for a, b in zip(pts, pts[1:]):
        assert math.dist(a.centroid, b.centroid) > 2 * cfg.stddev_threshold - 0.02


def _noisy_stream(seed, n=400):
    rng = np.random.default_rng(seed)
    poses = np.array([[0, 0, 1], [0.7, 0, 0.7], [0, -0.6, 0.8]])
    idx = np.repeat(rng.integers(0, 3, size=n // 40 + 1), 40)[:n]
    xyz = poses[idx] + rng.normal(0, rng.choice([0.005, 0.02, 0.2]), size=(n, 3))
    t = np.cumsum(rng.integers(5, 15, size=n))
    return from_arrays(t, xyz)


@pytest.mark.parametrize("seed", range(8))
def test_centroids_are_window_means(seed):
    tr = _noisy_stream(seed)
    cfg = PreprocessConfig()
    samples = list(tr)
    xyz = tr.xyz()
    for p in detect_stable(tr, cfg):
        starts = [i for i, s in enumerate(samples) if s.t == p.t_start]
        ok = False
        for i in starts:
            w = samples[i:i + cfg.window_size]
            if len(w) == cfg.window_size and w[-1].t == p.t_end:
                mean = xyz[i:i + cfg.window_size].mean(axis=0)
                if np.allclose(mean, p.centroid, atol=1e-12):
                    assert window_stddev(w) <= cfg.stddev_threshold
                    ok = True
        assert ok


@pytest.mark.parametrize("seed", range(8))
def test_streaming_matches_batch(seed):
    tr = _noisy_stream(seed)
    det = StableDetector()
    streamed = [p for s in tr if (p := det.push(s)) is not None]
    assert streamed == list(detect_stable(tr))


@given(st.integers(0, 10**7), st.integers(0, 5))
@settings(max_examples=30, deadline=None)
def test_translation_invariance(shift, seed):
    tr = _noisy_stream(seed, 200)
    shifted = from_arrays(tr.times() + shift, tr.xyz())
    assert len(list(detect_stable(tr))) == len(list(detect_stable(shifted)))


def test_degenerate_config_one_point():
    cfg = PreprocessConfig(stddev_threshold=math.inf, dwell_ms=0)
    for seed in range(4):
        assert len(list(detect_stable(_noisy_stream(seed), cfg))) == 1
