"""Newline-delimited JSON datasets and run reports.

A dataset file starts with a header record ``{"d": <dim>, "name": ...}``
followed by one ``{"id": <int>, "vertices": [[...], ...]}`` record per curve.
Floats are written with ``repr`` precision, which round-trips doubles exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO

from .errors import KLMedianError
from .geometry import CurveSet, PolygonalCurve

__all__ = ["DatasetError", "Dataset", "dumps_dataset", "loads_dataset", "read_dataset", "write_dataset"]


class DatasetError(KLMedianError):
    """Malformed dataset file."""


@dataclass(frozen=True)
class Dataset:
    curves: CurveSet
    d: int
    name: str | None = None


def dumps_dataset(ds: Dataset) -> str:
    header = {"d": ds.d}
    if ds.name is not None:
        header["name"] = ds.name
    lines = [json.dumps(header)]
    for i, c in zip(ds.curves.ids, ds.curves):
        lines.append(json.dumps({"id": int(i), "vertices": c.tolist()}))
    return "\n".join(lines) + "\n"


def loads_dataset(text: str) -> Dataset:
    records = [(n, line) for n, line in enumerate(text.splitlines(), 1) if line.strip()]
    if not records:
        raise DatasetError("empty dataset file")
    n0, first = records[0]
    try:
        header = json.loads(first)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"line {n0}: invalid JSON ({exc.msg})") from None
    if not isinstance(header, dict) or not isinstance(header.get("d"), int) or header["d"] < 1:
        raise DatasetError(f"line {n0}: header must be an object with a positive integer 'd'")
    d = header["d"]
    curves, ids, seen = [], [], set()
    for n, line in records[1:]:
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {n}: invalid JSON ({exc.msg})") from None
        if not isinstance(rec, dict) or not isinstance(rec.get("id"), int) or not isinstance(rec.get("vertices"), list):
            raise DatasetError(f"line {n}: record needs integer 'id' and list 'vertices'")
        if rec["id"] in seen:
            raise DatasetError(f"line {n}: duplicate id {rec['id']}")
        verts = rec["vertices"]
        if not verts or any(not isinstance(v, list) or len(v) != d for v in verts):
            raise DatasetError(f"line {n}: vertices must be a non-empty list of length-{d} lists")
        try:
            curve = PolygonalCurve(verts)
        except (ValueError, TypeError) as exc:
            raise DatasetError(f"line {n}: {exc}") from None
        seen.add(rec["id"])
        ids.append(rec["id"])
        curves.append(curve)
    return Dataset(CurveSet.of(curves, ids), d, header.get("name"))


def read_dataset(path: str | Path) -> Dataset:
    return loads_dataset(Path(path).read_text())


def write_dataset(ds: Dataset, path: str | Path | IO[str]) -> None:
    text = dumps_dataset(ds)
    if hasattr(path, "write"):
        path.write(text)
    else:
        Path(path).write_text(text)
