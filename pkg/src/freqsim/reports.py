"""CSV readers/writers and self-describing, reproducible JSON reports."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .funnel import StudySummary
from .simulate import Dataset

SCHEMA_VERSION = 1
DATASET_HEADER = ["subject", "item", "condition", "rt"]
STUDIES_HEADER = ["study_id", "mean_effect", "se"]


class InputError(ValueError):
    """Malformed or unreadable input file."""


def _plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        # 17 significant digits round-trip every double; NaN/inf have no JSON form
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(kind: str, config: dict, result) -> str:
    """JSON text with schema version, toolkit version, run config and result."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "toolkit": {"name": "freqsim", "version": __version__},
        "report": kind,
        "config": _plain(config),
        "result": _plain(result),
    }
    return _encode(doc, 2, 0) + "\n"


def format_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g") if math.isfinite(x) else "NA"
    if x is None:
        return "NA"
    return str(x)


def table_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_rows(path, header):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            found = next(reader, None)
            if found is None:
                raise InputError(f"{path}: file is empty")
            if [h.strip() for h in found] != header:
                raise InputError(f"{path}: expected header {','.join(header)!r}, got {','.join(found)!r}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(header):
                    raise InputError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
                rows.append((lineno, [c.strip() for c in row]))
            return rows
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _number(path, lineno, name, text):
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"{path}:{lineno}: {name} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise InputError(f"{path}:{lineno}: {name} must be finite, got {text!r}")
    return value


def read_dataset(path) -> Dataset:
    """Read a ``subject,item,condition,rt`` CSV; no coercion of bad values."""
    rows = _read_rows(path, DATASET_HEADER)
    if not rows:
        raise InputError(f"{path}: no data rows")
    subject, item, cond, rt = [], [], [], []
    for lineno, (s, i, c, r) in rows:
        if c not in ("a", "b"):
            raise InputError(f"{path}:{lineno}: condition must be 'a' or 'b', got {c!r}")
        value = _number(path, lineno, "rt", r)
        if value <= 0:
            raise InputError(f"{path}:{lineno}: rt must be positive, got {r!r}")
        subject.append(s)
        item.append(i)
        cond.append(c)
        rt.append(value)
    return Dataset(np.array(subject), np.array(item), np.array(cond), np.array(rt))


def dataset_csv(data: Dataset) -> str:
    return table_csv(DATASET_HEADER, zip(data.subject.tolist(), data.item.tolist(),
                                         data.condition.tolist(), data.rt.tolist()))


def read_studies(path) -> list:
    rows = _read_rows(path, STUDIES_HEADER)
    if not rows:
        raise InputError(f"{path}: no data rows")
    studies = []
    for lineno, (sid, m, se) in rows:
        mean, se_value = _number(path, lineno, "mean_effect", m), _number(path, lineno, "se", se)
        if se_value <= 0:
            raise InputError(f"{path}:{lineno}: se must be positive, got {se!r}")
        studies.append(StudySummary(sid, mean, se_value))
    return studies


def read_column(path, column: str) -> np.ndarray:
    """Read one numeric column from a headed CSV."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or column not in reader.fieldnames:
                raise InputError(f"{path}: no column {column!r}")
            values = [_number(path, k, column, row[column]) for k, row in enumerate(reader, start=2)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return np.array(values)
