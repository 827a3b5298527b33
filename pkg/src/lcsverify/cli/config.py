"""Run configuration: JSON documents, presets and ``LCS_`` environment overrides."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Mapping

from ..errors import InputError
from ..fbc import FbcGroup
from ..latmod.lemma import HOLDS, VIOLATION
from .presets import ALL_SECTIONS, PRESETS, preset


class ConfigError(InputError):
    """Invalid configuration; ``location`` names the offending key."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass
class Caps:
    magnus_cap: int = 12
    class_cap: int = 7
    tensor_max: int = 12
    exterior_cross_max: int = 3
    norm_max: int = 40
    exterior_limit: int = 200
    degree_cap: int = 8
    lie_exterior_dim: int = 12
    witness_max: int = 4
    engine_max_entries: int = 10**7

    def validate(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise ConfigError(f"caps.{f.name}", f"must be a positive integer, got {v!r}")
        if self.class_cap < 3:
            raise ConfigError("caps.class_cap", "the engine needs class at least 3")


@dataclass
class RunConfig:
    group: dict
    sections: list[str] = field(default_factory=lambda: list(ALL_SECTIONS))
    caps: Caps = field(default_factory=Caps)
    expect: dict[str, str] = field(default_factory=dict)
    expect_values: dict[str, dict] = field(default_factory=dict)
    preset: str | None = None

    def build_group(self) -> FbcGroup:
        try:
            return FbcGroup.from_config(self.group)
        except InputError as exc:
            raise ConfigError("group", str(exc)) from None

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "group": self.group,
            "sections": list(self.sections),
            "caps": asdict(self.caps),
            "expect": dict(self.expect),
            "expect_values": dict(self.expect_values),
        }


ENV_PREFIX = "LCS_"


def env_overrides(environ: Mapping[str, str] | None = None) -> dict[str, int]:
    """Caps from variables such as ``LCS_CLASS_CAP=6``."""
    environ = os.environ if environ is None else environ
    names = {f.name for f in fields(Caps)}
    out = {}
    for key, value in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        name = key[len(ENV_PREFIX):].lower()
        if name not in names:
            continue
        try:
            out[name] = int(value)
        except ValueError:
            raise ConfigError(key, f"not an integer: {value!r}") from None
    return out


def from_dict(doc: Mapping, cap_overrides: Mapping[str, int] | None = None) -> RunConfig:
    if not isinstance(doc, Mapping):
        raise ConfigError("<root>", "config must be a JSON object")
    known = {"preset", "group", "sections", "caps", "expect", "expect_values"}
    for key in doc:
        if key not in known:
            raise ConfigError(key, "unknown key")
    base = {}
    name = doc.get("preset")
    if name is not None:
        if name not in PRESETS:
            raise ConfigError("preset", f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        base = preset(name)
    group = doc.get("group", base.get("group"))
    if isinstance(group, str):
        if group not in PRESETS:
            raise ConfigError("group", f"unknown preset {group!r}")
        group = preset(group)["group"]
    if not isinstance(group, Mapping):
        raise ConfigError("group", "missing group (give a preset name or an inline group object)")
    sections = doc.get("sections", base.get("sections", list(ALL_SECTIONS)))
    if not isinstance(sections, list):
        raise ConfigError("sections", "must be a list")
    for i, s in enumerate(sections):
        if s not in ALL_SECTIONS:
            raise ConfigError(f"sections[{i}]", f"unknown section {s!r}")
    caps_doc = {**base.get("caps", {}), **doc.get("caps", {})}
    caps_doc.update(cap_overrides or {})
    valid = {f.name for f in fields(Caps)}
    for key in caps_doc:
        if key not in valid:
            raise ConfigError(f"caps.{key}", "unknown cap")
    caps = Caps(**caps_doc)
    caps.validate()
    expect = {**base.get("expect", {}), **doc.get("expect", {})}
    for sec, verdict in expect.items():
        if sec not in ALL_SECTIONS:
            raise ConfigError(f"expect.{sec}", "unknown section")
        if verdict not in (HOLDS, VIOLATION):
            raise ConfigError(f"expect.{sec}", f"expected {HOLDS!r} or {VIOLATION!r}")
    values = {**base.get("expect_values", {}), **doc.get("expect_values", {})}
    for key, want in values.items():
        if not isinstance(want, Mapping):
            raise ConfigError(f"expect_values.{key}", "must map data keys to expected values")
    rel = group.get("relator")
    if rel is not None and (not isinstance(rel, int) or not 0 <= rel < len(group.get("identities", ()))):
        raise ConfigError("group.relator", "must index one of the group's identities")
    cfg = RunConfig(dict(group), list(sections), caps, expect, values, name)
    cfg.build_group()
    return cfg


def load(path: str | Path | None = None, preset_name: str | None = None, cap_overrides=None) -> RunConfig:
    """Read a JSON config file (or start from a preset); env caps apply first,
    explicit ``cap_overrides`` last."""
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(str(path), f"cannot read: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    else:
        doc = {"preset": preset_name or "paper"}
    if preset_name is not None and path is not None:
        doc = {**doc, "preset": preset_name}
    overrides = {**env_overrides(), **(cap_overrides or {})}
    return from_dict(doc, overrides)
