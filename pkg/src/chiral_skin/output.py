"""Tabular dataset files: CSV with a provenance comment line, or JSON."""

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PROVENANCE_PREFIX = "# chiral-skin config: "


@dataclass
class Table:
    name: str
    columns: list
    rows: list = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(values)


@dataclass
class Check:
    name: str
    passed: bool
    value: float = float("nan")
    tolerance: float = float("nan")
    detail: str = ""


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else f"{float(v):.17g}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return ";".join(format_value(x) for x in v)
    if v is None:
        return ""
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return None if math.isnan(v) else float(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_json_value(x) for x in v]
    return v


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_csv(table, provenance):
    buf = io.StringIO()
    buf.write(PROVENANCE_PREFIX + json.dumps(provenance, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def render_json(table, provenance):
    doc = {
        "provenance": provenance,
        "columns": list(table.columns),
        "rows": [[_json_value(v) for v in row] for row in table.rows],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def write_table(out_dir, table, provenance, fmt="csv"):
    suffix = "csv" if fmt == "csv" else "json"
    path = Path(out_dir) / f"{table.name}.{suffix}"
    text = render_csv(table, provenance) if fmt == "csv" else render_json(table, provenance)
    atomic_write(path, text)
    return path


def read_table(path):
    """Load a table written by :func:`write_table` as (columns, rows of str/values)."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text())
        return doc["columns"], doc["rows"]
    with path.open(newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    columns = next(reader)
    return columns, [row for row in reader]


def read_columns(path):
    """Table as ``{column: list}``, numeric strings converted to float."""
    columns, rows = read_table(path)
    out = {c: [] for c in columns}
    for row in rows:
        for c, v in zip(columns, row):
            if isinstance(v, str):
                try:
                    v = float(v)
                except ValueError:
                    pass
            out[c].append(v)
    return out


def read_provenance(path):
    path = Path(path)
    if path.suffix == ".json":
        return json.loads(path.read_text())["provenance"]
    with path.open() as fh:
        first = fh.readline()
    if not first.startswith(PROVENANCE_PREFIX):
        raise ValueError(f"{path} has no provenance line")
    return json.loads(first[len(PROVENANCE_PREFIX):])
