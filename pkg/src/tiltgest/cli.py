"""``tiltgest`` command line.

Subcommands::

    synth      write a synthetic trace (one pose, or a scripted gesture)
    calibrate  build a calibration file from per-pose traces
    classify   classify every stable point of a trace
    replay     run a trace through a profile, print events and commands
    bench      circular-menu target benchmark with synthetic subjects

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .calibration import (DirectionLabel, calibrate_steady, calibration_to_dict, direction_vector,
                          load_calibration, new_calibration, try_add_direction)
from .classify import LevelBoundaries, classify
from .errors import TiltError
from .harness import EngineConfig, TargetSession, run_target_session
from .pipeline import Recognizer
from .preprocess import PreprocessConfig, detect_stable
from .profiles import load_profile
from .trace_io import DEFAULT_RATE_HZ, SynthSpec, read_trace, serialize_trace, synth_keyframes, synth_trace

SCHEMA_HELP = """\
trace file (JSON Lines):   {"rate_hz": 100.0}   optional first line
                           {"t": <int ms>, "ax": <g>, "ay": <g>, "az": <g>}
synth --script:            comma separated LABEL[@TILT_DEG]:HOLD_MS, e.g.
                           Steady:500,Right:400,Steady:400,Right:400,Steady:500
calibrate --pose:          LABEL[:LEVEL]=TRACE, e.g. Right=right.jsonl, Up:2=up2.jsonl
profiles:                  slideshow | photobrowser | flightsim | path/to/profile.json
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{SCHEMA_HELP}")
        sys.exit(1)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _preprocess_cfg(args) -> PreprocessConfig:
    return PreprocessConfig(window_size=args.window, stddev_threshold=args.threshold, dwell_ms=args.dwell_ms)


def _add_preprocess_flags(p, threshold=0.05):
    p.add_argument("--window", type=int, default=6, help="samples per stability window")
    p.add_argument("--threshold", type=float, default=threshold, help="stddev threshold in g")
    p.add_argument("--dwell-ms", type=float, default=200.0, help="hold time before a pose counts")


# -- synth -------------------------------------------------------------------

def _parse_script(script: str, default_tilt: float):
    segs = []
    for part in script.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            pose, ms = part.rsplit(":", 1)
            hold = float(ms)
            if "@" in pose:
                name, tilt = pose.split("@", 1)
                tilt = float(tilt)
            else:
                name, tilt = pose, default_tilt
        except ValueError:
            raise UsageError(f"bad script segment {part!r}") from None
        segs.append((direction_vector(DirectionLabel.parse(name), tilt), hold))
    if not segs:
        raise UsageError("empty script")
    return segs


def cmd_synth(args) -> int:
    if args.script:
        keys = []
        t = 0.0
        for i, (v, hold) in enumerate(_parse_script(args.script, args.tilt)):
            if i:
                t += args.ramp_ms
            keys.append((t, v))
            t += hold
            keys.append((t, v))
        trace = synth_keyframes(keys, noise_sigma=args.sigma, rate_hz=args.rate,
                                tremor_amp=args.tremor, seed=args.seed)
    else:
        if args.direction is not None:
            d = np.asarray(args.direction, dtype=float)
            if args.normalize:
                d = d / np.linalg.norm(d)
        else:
            d = direction_vector(DirectionLabel.parse(args.label), args.tilt)
        spec = SynthSpec(tuple(float(x) for x in d), args.sigma, args.duration_ms, args.rate,
                         args.tremor, args.seed)
        trace = synth_trace(spec)
    out = _open_out(args.out)
    out.write(serialize_trace(trace))
    if out is not sys.stdout:
        out.close()
    return 0


# -- calibrate ---------------------------------------------------------------

def _parse_pose(text: str):
    if "=" not in text:
        raise UsageError(f"--pose expects LABEL[:LEVEL]=PATH, got {text!r}")
    spec, path = text.split("=", 1)
    level = 1
    if ":" in spec:
        spec, lv = spec.split(":", 1)
        try:
            level = int(lv)
        except ValueError:
            raise UsageError(f"bad level in {text!r}") from None
    return DirectionLabel.parse(spec), level, path


def _pose_point(path, cfg):
    pts = list(detect_stable(read_trace(path), cfg))
    if not pts:
        raise TiltError(f"{path}: no stable pose found")
    return pts[0]


def cmd_calibrate(args) -> int:
    cfg = _preprocess_cfg(args)
    poses = [_parse_pose(p) for p in args.pose]
    cset = new_calibration(args.directions, args.max_g, levels_enabled=args.levels)
    cset = calibrate_steady(_pose_point(args.steady, cfg), cset)
    for label, level, path in poses:
        cset = try_add_direction(cset, label, level, _pose_point(path, cfg))
    out = _open_out(args.out)
    json.dump(calibration_to_dict(cset), out, indent=2)
    out.write("\n")
    if out is not sys.stdout:
        out.close()
    return 0


# -- classify / replay -------------------------------------------------------

def cmd_classify(args) -> int:
    cset = load_calibration(args.calibration)
    b = LevelBoundaries(*args.levels) if args.levels else LevelBoundaries()
    for sp in detect_stable(read_trace(args.trace), _preprocess_cfg(args)):
        c = classify(cset, sp, b)
        row = sp.to_dict() | c.to_dict()
        sys.stdout.write(json.dumps(row, separators=(",", ":")) + "\n")
    return 0


def cmd_replay(args) -> int:
    cset = load_calibration(args.calibration)
    profile = load_profile(args.profile)
    pre = _preprocess_cfg(args) if args.threshold is not None else None
    rec = Recognizer(cset, profile, preprocess=pre)
    if args.mode:
        if args.mode not in profile.modes:
            raise TiltError(f"profile has no mode {args.mode!r}")
        rec.mode = args.mode
    for o in rec.run(read_trace(args.trace)):
        if args.commands_only and o.command is None:
            continue
        sys.stdout.write(json.dumps(o.to_dict(), separators=(",", ":")) + "\n")
    return 0


# -- bench -------------------------------------------------------------------

def cmd_bench(args) -> int:
    base = EngineConfig()
    pre = PreprocessConfig(window_size=args.window,
                           stddev_threshold=args.threshold if args.threshold is not None
                           else base.preprocess.stddev_threshold,
                           dwell_ms=args.dwell_ms)
    cfg = EngineConfig(preprocess=pre)
    sessions = [TargetSession(n, args.trials, args.sigma, args.seed) for n in args.targets]
    results = [run_target_session(s, cfg) for s in sessions]
    for r in results:
        sys.stdout.write(r.to_json() + "\n")
    if args.csv:
        out = _open_out(args.csv)
        for i, r in enumerate(results):
            out.write(r.csv_row(header=(i == 0)))
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tiltgest", description="Tilt gesture recognition toolkit.",
                 epilog=SCHEMA_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("synth", help="write a synthetic trace")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--direction", type=float, nargs=3, metavar=("X", "Y", "Z"))
    g.add_argument("--label", help="tilt direction name, e.g. Right")
    g.add_argument("--script", help="scripted gesture, see below")
    p.add_argument("--normalize", action="store_true", help="scale --direction to unit length")
    p.add_argument("--tilt", type=float, default=40.0, help="tilt angle in degrees for labels")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--duration-ms", type=float, default=1000.0)
    p.add_argument("--rate", type=float, default=DEFAULT_RATE_HZ)
    p.add_argument("--tremor", type=float, default=0.0)
    p.add_argument("--ramp-ms", type=float, default=200.0, help="transition time between script segments")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("calibrate", help="build a calibration file from pose traces")
    p.add_argument("--steady", required=True, help="trace of the steady pose")
    p.add_argument("--pose", action="append", default=[], help="LABEL[:LEVEL]=TRACE, repeatable")
    p.add_argument("--directions", type=int, default=8, help="direction count for the virtual border (default 8)")
    p.add_argument("--max-g", type=float, default=1.0)
    p.add_argument("--levels", action="store_true", help="enable tilt levels")
    _add_preprocess_flags(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("classify", help="classify stable points of a trace")
    p.add_argument("trace")
    p.add_argument("calibration")
    p.add_argument("--levels", type=float, nargs=3, metavar=("DEAD", "L1", "L2"))
    _add_preprocess_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("replay", help="replay a trace through a mapping profile")
    p.add_argument("trace")
    p.add_argument("calibration")
    p.add_argument("--profile", required=True)
    p.add_argument("--mode", help="start in this profile mode")
    p.add_argument("--commands-only", action="store_true")
    _add_preprocess_flags(p, threshold=None)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("bench", help="target selection benchmark")
    p.add_argument("--targets", type=int, nargs="+", default=[4, 8, 12, 16], choices=[4, 8, 12, 16])
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="also write CSV rows here ('-' for stdout)")
    _add_preprocess_flags(p, threshold=None)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"tiltgest {args.command}: {exc}\n\n{SCHEMA_HELP}")
        return 1
    except (TiltError, OSError) as exc:
        sys.stderr.write(f"tiltgest {args.command}: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
