"""End-to-end recognizer: samples in, gesture events and commands out."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .calibration import CalibrationSet
from .classify import Classification, LevelBoundaries, classify
from .mapping import (ClickConfig, DirectDispatcher, PointerTracker, SequenceOverflow, SequenceTracker,
                      TapDetector, TriggerMode)
from .preprocess import PreprocessConfig, StableDetector, StablePoint
from .profiles import MappingProfile, mode_switch, resolve
from .trace_io import AccelSample


@dataclass
class Output:
    """One line of recognizer output: an event plus its resolution."""

    event: object
    command: str | None = None
    mode: str | None = None

    def to_dict(self) -> dict:
        d = self.event.to_dict()
        if self.mode is not None:
            d["mode"] = self.mode
        if self.command is not None:
            d["command"] = self.command
        return d


@dataclass
class Diagnostics:
    stable_points: int = 0
    unresolved: int = 0
    overflows: int = 0
    classifications: list = field(default_factory=list)


class Recognizer:
    """Wires preprocess -> classify -> mapping -> profile lookup.

    Without a profile only direct events are produced, using ``trigger``.
    With a profile, the mapping schemes its entries use are switched on
    (direct, sequence, pointer, click) and events are resolved against the
    current mode, following the profile's mode transitions.
    """

    def __init__(self, cset: CalibrationSet, profile: MappingProfile | None = None, *,
                 preprocess: PreprocessConfig | None = None,
                 boundaries: LevelBoundaries | None = None,
                 trigger: TriggerMode | None = None,
                 pair_window_ms: float | None = None,
                 click: ClickConfig | None = None,
                 keep_classifications: bool = False):
        self.cset = cset
        self.profile = profile
        p = profile
        self.detector = StableDetector(preprocess or (p.preprocess if p else None) or PreprocessConfig())
        self.boundaries = boundaries or (p.level_boundaries if p else None) or LevelBoundaries()
        kinds = p.kinds() if p else {"direct"}
        trig = trigger or (p.trigger if p else TriggerMode.SINGLE_TILT)
        window = pair_window_ms if pair_window_ms is not None else (p.pair_window_ms if p else 1500.0)
        self.direct = DirectDispatcher(trig, window) if "direct" in kinds else None
        self.sequence = SequenceTracker() if "sequence" in kinds else None
        self.pointer = PointerTracker(p.pointer) if p is not None and p.pointer is not None else None
        want_clicks = "click" in kinds or self.pointer is not None
        self.taps = TapDetector(click or (p.click if p else None)) if want_clicks else None
        self.mode = p.start_mode if p else None
        self.diag = Diagnostics()
        self._keep = keep_classifications

    def _emit(self, ev, out: list[Output]) -> None:
        if isinstance(ev, SequenceOverflow):
            self.diag.overflows += 1
            out.append(Output(ev, None, self.mode))
            return
        if self.profile is None:
            out.append(Output(ev))
            return
        mode = self.mode
        cmd = resolve(self.profile, mode, ev)
        if cmd is None:
            self.diag.unresolved += 1
        else:
            self.mode = mode_switch(self.profile, mode, cmd)
        out.append(Output(ev, cmd.name if cmd else None, mode))

    def on_stable(self, sp: StablePoint, out: list[Output]) -> Classification:
        self.diag.stable_points += 1
        c = classify(self.cset, sp, self.boundaries)
        if self._keep:
            self.diag.classifications.append((sp, c))
        if self.direct is not None:
            ev = self.direct.step(c, sp.t_end)
            if ev is not None:
                self._emit(ev, out)
        if self.sequence is not None:
            ev = self.sequence.step(c, sp.t_end)
            if ev is not None:
                self._emit(ev, out)
        return c

    def push(self, s: AccelSample) -> list[Output]:
        out: list[Output] = []
        if self.taps is not None:
            for ev in self.taps.push(s):
                self._emit(ev, out)
        sp = self.detector.push(s)
        if sp is not None and (self.direct is not None or self.sequence is not None or self._keep):
            self.on_stable(sp, out)
        if self.pointer is not None:
            ev = self.pointer.feed(s)
            if ev is not None:
                self._emit(ev, out)
        return out

    def finish(self) -> list[Output]:
        out: list[Output] = []
        if self.taps is not None:
            for ev in self.taps.flush():
                self._emit(ev, out)
        return out

    def run(self, samples: Iterable[AccelSample]) -> list[Output]:
        out: list[Output] = []
        for s in samples:
            out.extend(self.push(s))
        out.extend(self.finish())
        return out
