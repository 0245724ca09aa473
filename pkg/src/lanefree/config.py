"""JSON configuration: one section per module, plus ``key=value`` overrides.

Example document (every field optional; omitted fields keep their defaults)::

    {
      "schema": "lanefree.config/1",
      "scenario": {"seed": 42, "road_width": 10.0, "n_neighbors": 10, "ego_start": null},
      "vehicle":  {"L": 2.5, "delta_min": -0.2618, "delta_max": 0.2618,
                   "a_min": -3.0, "a_max": 3.0, "a_max_lat": 1.0},
      "zones":    {"d_F": 7.0, "d_S": 12.0},
      "sampling": {"dt": 0.1, "H": 1.0, "n_delta": 9, "n_acc": 7},
      "planner":  {...}, "gains": {...}, "weights": {...}
    }
"""

from __future__ import annotations

import dataclasses
import json
import re
from typing import Any, Dict, Iterable, Optional, Tuple

from .feedback import Gains
from .optimizer import CostWeights, SamplingConfig
from .perception import ZoneConfig
from .planner import PlannerConfig
from .sim import ScenarioConfig
from .vehicle import VehicleParams, VehicleState

SCHEMA = "lanefree.config/1"

SECTIONS = {
    "vehicle": VehicleParams,
    "zones": ZoneConfig,
    "planner": PlannerConfig,
    "gains": Gains,
    "weights": CostWeights,
    "sampling": SamplingConfig,
}
SCENARIO_SCALARS = tuple(
    f.name for f in dataclasses.fields(ScenarioConfig) if f.name not in SECTIONS and f.name != "ego_start"
)


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<config>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


def _locate(text: Optional[str], section: str, key: Optional[str] = None) -> Optional[int]:
    """Best-effort 1-based line of ``"key":`` inside ``"section":``."""
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(section), text)
    if m is None:
        return None
    pos = m.start()
    if key is not None:
        k = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, m.end())
        if k is not None:
            pos = k.start()
    return text.count("\n", 0, pos) + 1


def _coerce(cls, name: str, value: Any):
    ftype = {f.name: f.type for f in dataclasses.fields(cls)}[name]
    if ftype in ("int", int):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise TypeError(f"expected an integer, got {value!r}")
        return int(value)
    if ftype in ("float", float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeError(f"expected a number, got {value!r}")
        return float(value)
    return value


def _build(cls, data: Dict[str, Any], section: str, text: Optional[str], source: str):
    if not isinstance(data, dict):
        raise ConfigError(f"section '{section}' must be an object", _locate(text, section), source)
    known = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(f"unknown key '{section}.{key}'", _locate(text, section, key), source)
        try:
            kwargs[key] = _coerce(cls, key, value)
        except TypeError as exc:
            raise ConfigError(f"'{section}.{key}': {exc}", _locate(text, section, key), source) from None
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid '{section}' section: {exc}", _locate(text, section), source) from None


def config_from_dict(doc: Dict[str, Any], text: Optional[str] = None, source: str = "<config>") -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a JSON object", 1, source)
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ConfigError(f"unsupported schema {schema!r} (expected {SCHEMA!r})", _locate(text, "schema"), source)
    unknown = set(doc) - set(SECTIONS) - {"scenario", "schema"}
    if unknown:
        name = sorted(unknown)[0]
        raise ConfigError(f"unknown section '{name}'", _locate(text, name), source)
    parts = {name: _build(cls, doc.get(name, {}), name, text, source) for name, cls in SECTIONS.items()}

    scen = dict(doc.get("scenario", {}))
    ego = scen.pop("ego_start", None)
    if ego is not None:
        try:
            parts["ego_start"] = VehicleState(**{k: float(ego[k]) for k in ("x", "y", "phi", "v")})
        except (KeyError, TypeError, ValueError):
            raise ConfigError(
                "'scenario.ego_start' must be null or {x, y, phi, v}", _locate(text, "scenario", "ego_start"), source
            ) from None
        if parts["ego_start"].v < 0:
            raise ConfigError("'scenario.ego_start.v' must be >= 0", _locate(text, "scenario", "ego_start"), source)
    for key, value in scen.items():
        if key not in SCENARIO_SCALARS:
            raise ConfigError(f"unknown key 'scenario.{key}'", _locate(text, "scenario", key), source)
        try:
            parts[key] = _coerce(ScenarioConfig, key, value)
        except TypeError as exc:
            raise ConfigError(f"'scenario.{key}': {exc}", _locate(text, "scenario", key), source) from None
    try:
        return ScenarioConfig(**parts)
    except ValueError as exc:
        raise ConfigError(f"invalid 'scenario' section: {exc}", _locate(text, "scenario"), source) from None


def config_to_dict(cfg: ScenarioConfig) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"schema": SCHEMA}
    scen = {name: getattr(cfg, name) for name in SCENARIO_SCALARS}
    scen["ego_start"] = dataclasses.asdict(cfg.ego_start) if cfg.ego_start is not None else None
    doc["scenario"] = scen
    for name in SECTIONS:
        doc[name] = dataclasses.asdict(getattr(cfg, name))
    return doc


def loads(text: str, source: str = "<config>") -> ScenarioConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg} (column {exc.colno})", exc.lineno, source) from None
    return config_from_dict(doc, text, source)


def load(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), str(path))


def dumps(cfg: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2)


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _resolve_key(key: str) -> Tuple[str, str]:
    if "." in key:
        section, name = key.split(".", 1)
        return section, name
    hits = []
    if key in SCENARIO_SCALARS or key == "ego_start":
        hits.append(("scenario", key))
    for section, cls in SECTIONS.items():
        if key in {f.name for f in dataclasses.fields(cls)}:
            hits.append((section, key))
    if not hits:
        raise ConfigError(f"--set: unknown key '{key}'", source="--set")
    if len(hits) > 1:
        options = ", ".join(f"{s}.{k}" for s, k in hits)
        raise ConfigError(f"--set: key '{key}' is ambiguous ({options})", source="--set")
    return hits[0]


def apply_overrides(cfg: ScenarioConfig, overrides: Iterable[str]) -> ScenarioConfig:
    """Apply ``section.key=value`` (or unambiguous ``key=value``) overrides."""
    doc = config_to_dict(cfg)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}", source="--set")
        key, raw = item.split("=", 1)
        section, name = _resolve_key(key.strip())
        if section not in doc or not isinstance(doc[section], dict):
            raise ConfigError(f"--set: unknown section '{section}'", source="--set")
        if name not in doc[section]:
            raise ConfigError(f"--set: unknown key '{section}.{name}'", source="--set")
        doc[section][name] = _parse_value(raw.strip())
    return config_from_dict(doc, source="--set")
