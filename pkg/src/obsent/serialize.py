"""JSON and CSV encodings for operators, coarse-grainings, and runs.

Operator JSON: {"dim": n, "entries": [[[re, im], ...], ...]} row-major.
Coarse-graining JSON: {"dim": n, "effects": [{"label": str, "matrix": ...}]}
with the operator encoding in "matrix". Readers reject non-finite values.

Run CSV: one row per (t, alpha) with the fixed header
t,alpha,S_oe,dS,beta_eff,xi1,xi2,xi3,mi,heat_over_T; absent quantities are
left empty; floats carry 17 significant digits, locale-independent.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .coarse_graining import CoarseGraining
from .errors import SchemaError
from .operators import as_matrix
from .thermo import ClosedRunRecord, OpenRunRecord

CSV_COLUMNS = (
    "t",
    "alpha",
    "S_oe",
    "dS",
    "beta_eff",
    "xi1",
    "xi2",
    "xi3",
    "mi",
    "heat_over_T",
)


def format_float(x: float) -> str:
    """17-significant-digit, locale-independent float rendering."""
    return "%.17g" % x


def operator_to_json(matrix) -> dict:
    m = as_matrix(matrix)
    return {
        "dim": int(m.shape[0]),
        "entries": [
            [[float(z.real), float(z.imag)] for z in row] for row in m
        ],
    }


def operator_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise SchemaError("operator object needs 'dim' and 'entries'")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim <= 0:
        raise SchemaError(f"'dim' must be a positive integer, got {dim!r}")
    entries = obj["entries"]
    if len(entries) != dim or any(len(row) != dim for row in entries):
        raise SchemaError(f"'entries' is not a {dim} x {dim} grid")
    out = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(entries):
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, (list, tuple))
                or len(cell) != 2
                or not all(isinstance(c, (int, float)) for c in cell)
            ):
                raise SchemaError(f"entry ({i},{j}) is not an [re, im] pair")
            re, im = float(cell[0]), float(cell[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise SchemaError(f"entry ({i},{j}) is not finite")
            out[i, j] = complex(re, im)
    return out


def coarse_graining_to_json(cg: CoarseGraining) -> dict:
    return {
        "dim": cg.dim,
        "effects": [
            {"label": str(lab), "matrix": operator_to_json(e)}
            for lab, e in zip(cg.labels, cg.effects)
        ],
    }


def coarse_graining_from_json(obj) -> CoarseGraining:
    if not isinstance(obj, dict) or "effects" not in obj:
        raise SchemaError("coarse-graining object needs 'effects'")
    labels, effects = [], []
    for k, item in enumerate(obj["effects"]):
        if "matrix" not in item:
            raise SchemaError(f"effect {k} has no 'matrix'")
        labels.append(item.get("label", str(k)))
        effects.append(operator_from_json(item["matrix"]))
    if "dim" in obj and effects and effects[0].shape[0] != obj["dim"]:
        raise SchemaError(
            f"declared dim {obj['dim']} != matrix dim {effects[0].shape[0]}"
        )
    return CoarseGraining(tuple(labels), tuple(effects))


def load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read JSON from {path}: {exc}") from exc


def dump_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def resolve_operator(node, base_dir: Path) -> np.ndarray:
    """Resolve an inline operator object or a {"path": ...} file reference."""
    if isinstance(node, dict) and "path" in node:
        return operator_from_json(load_json(base_dir / node["path"]))
    return operator_from_json(node)


def closed_record_rows(record: ClosedRunRecord):
    for s in record.samples:
        yield {
            "t": s.t,
            "alpha": s.alpha,
            "S_oe": s.entropy,
            "dS": s.delta_entropy,
            "beta_eff": s.beta_eff,
            "xi3": s.xi3,
            "heat_over_T": s.heat_over_t,
        }


def open_record_rows(record: OpenRunRecord):
    for s in record.samples:
        yield {
            "t": s.t,
            "alpha": s.alpha,
            "S_oe": s.joint_entropy,
            "dS": s.xi1,
            "xi1": s.xi1,
            "xi2": s.xi2,
            "mi": s.mutual_info,
        }


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        cells = []
        for col in CSV_COLUMNS:
            value = row.get(col)
            cells.append("" if value is None else format_float(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def run_to_csv(record) -> str:
    if isinstance(record, ClosedRunRecord):
        return rows_to_csv(closed_record_rows(record))
    if isinstance(record, OpenRunRecord):
        return rows_to_csv(open_record_rows(record))
    raise TypeError(f"not a run record: {type(record)!r}")
