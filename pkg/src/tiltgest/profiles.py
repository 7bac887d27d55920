"""Per-application mapping profiles.

A profile is a JSON file::

    {
      "app": "photobrowser",
      "trigger": "SingleTilt",
      "levels": false,
      "initial_mode": "browsing",
      "modes": {
        "browsing": {
          "entries": [
            {"gesture": {"kind": "direct", "label": "Right"}, "command": "Move right"}
          ],
          "transitions": [{"command": "View picture", "to": "editing"}]
        }
      },
      "pointer": {"screen_w": 1920, "screen_h": 1080}
    }

Gesture kinds are ``direct`` (label, optional level), ``sequence``
(labels), ``pointer`` (label naming the dominant movement direction) and
``click`` (``Tap`` or ``Shake``). Entries may carry a free-text
``description``. Optional top-level keys ``pair_window_ms``, ``preprocess``,
``level_boundaries`` and ``click`` tune the recognizer for the application.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .calibration import DirectionLabel
from .classify import LevelBoundaries
from .errors import DuplicateGestureKey, InvalidConfig, ParseError, UnknownMode
from .mapping import (ClickConfig, ClickEvent, ClickKind, DirectEvent, PointerConfig, PointerEvent,
                      SequenceEvent, TriggerMode)
from .preprocess import PreprocessConfig

BUILTIN_PROFILES = ("slideshow", "photobrowser", "flightsim")

POINTER_LABELS = (DirectionLabel.RIGHT, DirectionLabel.LEFT, DirectionLabel.UP, DirectionLabel.DOWN)


@dataclass(frozen=True)
class Command:
    name: str
    t: int = 0

    def __post_init__(self):
        if not self.name:
            raise ValueError("command name must be non-empty")


@dataclass(frozen=True)
class Entry:
    command: str
    description: str = ""


@dataclass(frozen=True)
class Mode:
    entries: dict = field(default_factory=dict)  # gesture key -> Entry
    transitions: dict = field(default_factory=dict)  # command name -> mode name


@dataclass(frozen=True)
class MappingProfile:
    app_name: str
    modes: dict  # name -> Mode, in file order
    trigger: TriggerMode = TriggerMode.SINGLE_TILT
    levels_enabled: bool = False
    initial_mode: str | None = None
    pointer: PointerConfig | None = None
    pair_window_ms: float = 1500.0
    preprocess: PreprocessConfig | None = None
    level_boundaries: LevelBoundaries | None = None
    click: ClickConfig | None = None

    @property
    def start_mode(self) -> str:
        return self.initial_mode or next(iter(self.modes))

    def kinds(self) -> set[str]:
        return {k[0] for m in self.modes.values() for k in m.entries}

    def commands(self, mode: str | None = None) -> set[str]:
        modes = [self.modes[mode]] if mode is not None else self.modes.values()
        return {e.command for m in modes for e in m.entries.values()}


# ---------------------------------------------------------------------------
# gesture keys


def _labels(raw, where: str) -> tuple[DirectionLabel, ...]:
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{where}: labels must be a non-empty list")
    out = tuple(DirectionLabel.parse(x) for x in raw)
    if DirectionLabel.STEADY in out:
        raise ParseError(f"{where}: Steady cannot appear in a gesture")
    return out


def parse_gesture(g: Any, where: str = "gesture") -> tuple:
    if not isinstance(g, dict) or "kind" not in g:
        raise ParseError(f"{where}: gesture must be an object with a kind")
    kind = g["kind"]
    if kind == "direct":
        label = DirectionLabel.parse(g.get("label"))
        level = g.get("level", 1)
        if label is DirectionLabel.STEADY:
            raise ParseError(f"{where}: Steady cannot be a direct gesture")
        if level not in (1, 2, 3):
            raise ParseError(f"{where}: level must be 1, 2 or 3")
        return ("direct", label, level)
    if kind == "sequence":
        return ("sequence", _labels(g.get("labels"), where))
    if kind == "pointer":
        label = DirectionLabel.parse(g.get("label"))
        if label not in POINTER_LABELS:
            raise ParseError(f"{where}: pointer gestures use Right/Left/Up/Down")
        return ("pointer", label)
    if kind == "click":
        try:
            return ("click", ClickKind(g.get("click", g.get("label"))))
        except ValueError:
            raise ParseError(f"{where}: click must be Tap or Shake") from None
    raise ParseError(f"{where}: unknown gesture kind {kind!r}")


def gesture_to_dict(key: tuple) -> dict:
    kind = key[0]
    if kind == "direct":
        d = {"kind": "direct", "label": key[1].value}
        if key[2] != 1:
            d["level"] = key[2]
        return d
    if kind == "sequence":
        return {"kind": "sequence", "labels": [l.value for l in key[1]]}
    if kind == "pointer":
        return {"kind": "pointer", "label": key[1].value}
    return {"kind": "click", "click": key[1].value}


def gesture_key(event) -> tuple | None:
    """Lookup key for an event; None for events that cannot map (zero pointer moves)."""
    if isinstance(event, DirectEvent):
        return ("direct", event.label, event.level)
    if isinstance(event, SequenceEvent):
        return ("sequence", tuple(event.labels))
    if isinstance(event, ClickEvent):
        return ("click", event.kind)
    if isinstance(event, PointerEvent):
        if event.dx == 0 and event.dy == 0:
            return None
        if abs(event.dx) >= abs(event.dy):
            return ("pointer", DirectionLabel.RIGHT if event.dx > 0 else DirectionLabel.LEFT)
        return ("pointer", DirectionLabel.DOWN if event.dy > 0 else DirectionLabel.UP)
    return None


# ---------------------------------------------------------------------------
# loading


def _sub(cls, raw, name):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ParseError(f"{name} must be an object")
    try:
        return cls(**raw)
    except (TypeError, InvalidConfig) as exc:
        raise ParseError(f"{name}: {exc}") from None


def profile_from_dict(d: Any) -> MappingProfile:
    if not isinstance(d, dict):
        raise ParseError("profile must be a JSON object")
    app = d.get("app")
    if not isinstance(app, str) or not app:
        raise ParseError("profile needs a non-empty 'app'")
    try:
        trigger = TriggerMode.parse(d.get("trigger", "SingleTilt"))
    except InvalidConfig as exc:
        raise ParseError(str(exc)) from None
    raw_modes = d.get("modes")
    if not isinstance(raw_modes, dict) or not raw_modes:
        raise ParseError("profile needs at least one mode")
    modes = {}
    for mname, raw in raw_modes.items():
        if not isinstance(raw, dict):
            raise ParseError(f"mode {mname!r} must be an object")
        entries = {}
        for i, e in enumerate(raw.get("entries", [])):
            where = f"{mname}.entries[{i}]"
            if not isinstance(e, dict):
                raise ParseError(f"{where} must be an object")
            key = parse_gesture(e.get("gesture"), where)
            cmd = e.get("command")
            if not isinstance(cmd, str) or not cmd:
                raise ParseError(f"{where}: command must be a non-empty string")
            if key in entries:
                raise DuplicateGestureKey(mname, gesture_to_dict(key))
            entries[key] = Entry(cmd, str(e.get("description", "")))
        transitions = {}
        for i, tr in enumerate(raw.get("transitions", [])):
            if not isinstance(tr, dict) or not isinstance(tr.get("command"), str) or not isinstance(tr.get("to"), str):
                raise ParseError(f"{mname}.transitions[{i}] needs 'command' and 'to'")
            transitions[tr["command"]] = tr["to"]
        modes[mname] = Mode(entries, transitions)
    for mname, m in modes.items():
        for cmd, target in m.transitions.items():
            if target not in modes:
                raise ParseError(f"{mname}: transition to unknown mode {target!r}")
    initial = d.get("initial_mode")
    if initial is not None and initial not in modes:
        raise ParseError(f"initial_mode {initial!r} is not a declared mode")
    levels = bool(d.get("levels", False))
    for mname, m in modes.items():
        if not levels and any(k[0] == "direct" and k[2] != 1 for k in m.entries):
            raise ParseError(f"{mname}: level > 1 used but levels are disabled")
    return MappingProfile(
        app_name=app,
        modes=modes,
        trigger=trigger,
        levels_enabled=levels,
        initial_mode=initial,
        pointer=_sub(PointerConfig, d.get("pointer"), "pointer"),
        pair_window_ms=float(d.get("pair_window_ms", 1500.0)),
        preprocess=_sub(PreprocessConfig, d.get("preprocess"), "preprocess"),
        level_boundaries=_sub(LevelBoundaries, d.get("level_boundaries"), "level_boundaries"),
        click=_sub(ClickConfig, d.get("click"), "click"),
    )


def profile_to_dict(p: MappingProfile) -> dict:
    d: dict = {"app": p.app_name, "trigger": p.trigger.value, "levels": p.levels_enabled}
    if p.initial_mode is not None:
        d["initial_mode"] = p.initial_mode
    d["modes"] = {}
    for name, m in p.modes.items():
        entries = []
        for key, e in m.entries.items():
            row = {"gesture": gesture_to_dict(key), "command": e.command}
            if e.description:
                row["description"] = e.description
            entries.append(row)
        md = {"entries": entries}
        if m.transitions:
            md["transitions"] = [{"command": c, "to": t} for c, t in m.transitions.items()]
        d["modes"][name] = md
    if p.pointer is not None:
        d["pointer"] = p.pointer.to_dict()
    if p.pair_window_ms != 1500.0:
        d["pair_window_ms"] = p.pair_window_ms
    for name in ("preprocess", "level_boundaries", "click"):
        v = getattr(p, name)
        if v is not None:
            d[name] = dict(v.__dict__)
    return d


def load_profile(path) -> MappingProfile:
    """Load a profile from a file path, or a builtin by bare name (``"slideshow"``)."""
    if str(path) in BUILTIN_PROFILES:
        return load_builtin(str(path))
    try:
        with open(path, encoding="utf-8") as f:
            d = json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return profile_from_dict(d)


def builtin_path(name: str):
    return resources.files("tiltgest") / "data" / "profiles" / f"{name}.json"


def load_builtin(name: str) -> MappingProfile:
    if name not in BUILTIN_PROFILES:
        raise ParseError(f"no builtin profile {name!r}")
    return profile_from_dict(json.loads(builtin_path(name).read_text(encoding="utf-8")))


# ---------------------------------------------------------------------------
# lookup


def resolve(profile: MappingProfile, mode_name: str, event) -> Command | None:
    """Command bound to ``event`` in ``mode_name``, or None if unbound."""
    mode = profile.modes.get(mode_name)
    if mode is None:
        raise UnknownMode(mode_name)
    key = gesture_key(event)
    entry = mode.entries.get(key) if key is not None else None
    if entry is None:
        return None
    return Command(entry.command, getattr(event, "t", 0))


def mode_switch(profile: MappingProfile, current_mode: str, event) -> str:
    """Mode after ``event``. Accepts a gesture event, a Command or a command name."""
    mode = profile.modes.get(current_mode)
    if mode is None:
        return current_mode
    if isinstance(event, Command):
        name = event.name
    elif isinstance(event, str):
        name = event
    else:
        cmd = resolve(profile, current_mode, event)
        name = cmd.name if cmd else None
    return mode.transitions.get(name, current_mode)
