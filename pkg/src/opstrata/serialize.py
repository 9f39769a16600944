"""JSON (and CSV, for matrices) reading and writing.

Matrices are ``{"rows": r, "cols": c, "data": [row-major numbers]}``.  Paths
are a JSON list of segments, each carrying its kind, its parameters as
matrices/vectors/angles, its invariants and its provenance.  Floats are
written with Python's shortest round-trip repr, so a write/read cycle is
bit-identical.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .linalg import as_matrix
from .paths import (
    AffineSegment,
    Invariant,
    OperatorPath,
    RightAffineSegment,
    RotationSegment,
)
from .subspace import Subspace


def matrix_to_dict(a) -> dict:
    a = np.asarray(a, dtype=float)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": a.ravel().tolist()}


def matrix_from_dict(d, allow_empty=False) -> np.ndarray:
    try:
        rows, cols, data = int(d["rows"]), int(d["cols"]), d["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix object needs rows, cols and data: {exc}") from None
    if len(data) != rows * cols:
        raise ValueError(f"data has {len(data)} entries, expected {rows * cols}")
    a = np.array(data, dtype=float).reshape(rows, cols)
    if allow_empty:
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        return a
    return as_matrix(a)


def read_matrix(path) -> np.ndarray:
    """Read a matrix from a ``.json`` or ``.csv`` file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".csv":
        rows = [[float(x) for x in row] for row in csv.reader(io.StringIO(text)) if row]
        return as_matrix(rows)
    return matrix_from_dict(json.loads(text))


def write_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")


def write_matrix(a, path):
    write_json(matrix_to_dict(a), path)


def subspace_to_dict(s: Subspace) -> dict:
    return {"ambient_dim": s.ambient_dim, "basis": matrix_to_dict(s.basis)}


def subspace_from_dict(d) -> Subspace:
    basis = matrix_from_dict(d["basis"], allow_empty=True)
    if basis.shape[0] != int(d["ambient_dim"]):
        raise ValueError("basis rows do not match ambient_dim")
    return Subspace(basis)


def invariant_to_dict(inv: Invariant) -> dict:
    out = {"kind": inv.kind}
    if inv.rank is not None:
        out["rank"] = inv.rank
    if inv.subspace is not None:
        out["subspace"] = subspace_to_dict(inv.subspace)
    return out


def invariant_from_dict(d) -> Invariant:
    sub = subspace_from_dict(d["subspace"]) if "subspace" in d else None
    return Invariant(d["kind"], rank=d.get("rank"), subspace=sub)


def segment_to_dict(seg) -> dict:
    out = {"kind": seg.kind}
    if isinstance(seg, AffineSegment):
        out["base"] = matrix_to_dict(seg.base)
        out["direction"] = matrix_to_dict(seg.direction)
    elif isinstance(seg, RightAffineSegment):
        out["left"] = matrix_to_dict(seg.left)
        out["base"] = matrix_to_dict(seg.base)
        out["direction"] = matrix_to_dict(seg.direction)
    elif isinstance(seg, RotationSegment):
        out["base"] = matrix_to_dict(seg.base)
        out["u"] = seg.u.tolist()
        out["v"] = seg.v.tolist()
        out["angle"] = seg.angle
        out["side"] = seg.side
    else:
        raise TypeError(f"cannot serialize {type(seg).__name__}")
    out["reversed"] = seg.reverse
    out["invariants"] = [invariant_to_dict(i) for i in seg.invariants]
    out["provenance"] = seg.provenance
    return out


def segment_from_dict(d):
    common = {
        "invariants": tuple(invariant_from_dict(i) for i in d["invariants"]),
        "provenance": d.get("provenance", ""),
        "reverse": bool(d.get("reversed", False)),
    }
    kind = d["kind"]
    if kind == "affine":
        return AffineSegment(
            base=matrix_from_dict(d["base"]), direction=matrix_from_dict(d["direction"]), **common
        )
    if kind == "right_affine":
        return RightAffineSegment(
            left=matrix_from_dict(d["left"]),
            base=matrix_from_dict(d["base"]),
            direction=matrix_from_dict(d["direction"]),
            **common,
        )
    if kind == "rotation":
        return RotationSegment(
            base=matrix_from_dict(d["base"]),
            u=np.array(d["u"], dtype=float),
            v=np.array(d["v"], dtype=float),
            angle=float(d["angle"]),
            side=d.get("side", "left"),
            **common,
        )
    raise ValueError(f"unknown segment kind {kind!r}")


def path_to_list(path: OperatorPath) -> list:
    return [segment_to_dict(s) for s in path.segments]


def path_from_list(items) -> OperatorPath:
    if not isinstance(items, list):
        raise ValueError("a path file must hold a JSON list of segments")
    return OperatorPath(tuple(segment_from_dict(d) for d in items))


def read_path(path) -> OperatorPath:
    return path_from_list(json.loads(Path(path).read_text(encoding="utf-8")))


def write_path(op: OperatorPath, path):
    write_json(path_to_list(op), path)
