"""SimLog serialisation.

CSV layout: a ``# schema: lanefree.simlog.csv/1`` line, a header with the
columns of :data:`lanefree.sim.RECORD_FIELDS` in order, then one row per step.
Floats use Python's shortest round-trip repr; booleans are 0/1; an infinite
cost or clearance is written as ``inf``.

The JSON document carries ``schema``, ``config`` (re-loadable with
:func:`lanefree.config.config_from_dict`), ``records`` and ``summary``.
Non-finite floats become ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from typing import Any, Dict, List

from .config import config_to_dict
from .sim import RECORD_FIELDS, SimLog

CSV_SCHEMA = "lanefree.simlog.csv/1"
JSON_SCHEMA = "lanefree.simlog/1"

_INT_FIELDS = {"step", "n_front", "n_left", "n_right"}
_BOOL_FIELDS = {"feasible", "collision"}


def atomic_write(path, data: str) -> None:
    """Write-then-rename so readers never see a partial file."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(log: SimLog) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {CSV_SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in log.records:
        w.writerow([_cell(getattr(r, name)) for name in RECORD_FIELDS])
    return buf.getvalue()


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def to_json(log: SimLog) -> str:
    doc = {
        "schema": JSON_SCHEMA,
        "config": config_to_dict(log.config),
        "records": [{name: getattr(r, name) for name in RECORD_FIELDS} for r in log.records],
        "summary": log.summary,
    }
    return json.dumps(_json_safe(doc), indent=1, allow_nan=False) + "\n"


def write_csv(log: SimLog, path) -> None:
    atomic_write(path, to_csv(log))


def write_json(log: SimLog, path) -> None:
    atomic_write(path, to_json(log))


def _parse_cell(name: str, raw: str):
    if name in _INT_FIELDS:
        return int(raw)
    if name in _BOOL_FIELDS:
        return raw == "1"
    return float(raw)


def read_csv(path) -> List[Dict[str, Any]]:
    with open(path, encoding="utf-8", newline="") as fh:
        first = fh.readline()
        if first.strip() != f"# schema: {CSV_SCHEMA}":
            raise ValueError(f"{path}: not a {CSV_SCHEMA} file")
        rows = list(csv.DictReader(fh))
    return [{k: _parse_cell(k, v) for k, v in row.items()} for row in rows]


def read_json(path) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != JSON_SCHEMA:
        raise ValueError(f"{path}: not a {JSON_SCHEMA} document")
    for r in doc["records"]:
        for key in ("cost", "clearance"):
            if r.get(key) is None:
                r[key] = math.inf
    return doc


def read_records(path) -> List[Dict[str, Any]]:
    """Records from either log format, chosen by extension."""
    if os.fspath(path).endswith(".json"):
        return read_json(path)["records"]
    return read_csv(path)
