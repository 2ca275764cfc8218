"""JSON/CSV encoding shared by all reports.

Complex numbers become ``{"re": .., "im": ..}``; non-finite floats become the
strings ``"inf"``, ``"-inf"`` and ``"nan"`` so the output stays strict JSON.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math

import numpy as np


def _float(v: float):
    if math.isfinite(v):
        return v
    if math.isnan(v):
        return "nan"
    return "inf" if v > 0 else "-inf"


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _float(obj.real), "im": _float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(_float(float(v))) if math.isfinite(v) else _float(float(v))
    return v


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        if dataclasses.is_dataclass(row):
            row = dataclasses.asdict(row)
        w.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


INEQUALITY_COLUMNS = ("name", "n", "lhs", "rhs", "slack", "ratio", "satisfied")


def inequalities_csv(reports) -> str:
    return rows_to_csv(reports, INEQUALITY_COLUMNS)


def histogram_csv(centers, probs) -> str:
    return rows_to_csv(
        ({"bin_center": float(c), "probability": float(p)} for c, p in zip(centers, probs)),
        ("bin_center", "probability"),
    )
