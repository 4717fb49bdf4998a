"""JSON polygon and report documents, CSV sweeps."""
from __future__ import annotations

import json
import math
from dataclasses import asdict
from pathlib import Path

from .counting import DiagonalSums, DistanceStats, TriangleCensus
from .geom import ConvexityError, ConvexPolygon

SCHEMA_VERSION = 1


class PolygonFileError(ValueError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


def polygon_to_doc(poly: ConvexPolygon, meta: dict | None = None) -> dict:
    doc = {"vertices": [[p.x, p.y] for p in poly.vertices]}
    if meta:
        doc["meta"] = meta
    return doc


def polygon_from_doc(doc) -> ConvexPolygon:
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise PolygonFileError('polygon document needs a "vertices" field')
    verts = doc["vertices"]
    if not isinstance(verts, list):
        raise PolygonFileError('"vertices" must be a list of [x, y] pairs')
    pts = []
    for i, v in enumerate(verts):
        if not (isinstance(v, (list, tuple)) and len(v) == 2):
            raise PolygonFileError(f"vertex {i}: expected an [x, y] pair, got {v!r}", i)
        try:
            x, y = float(v[0]), float(v[1])
        except (TypeError, ValueError):
            raise PolygonFileError(f"vertex {i}: coordinates must be numbers, got {v!r}", i) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise PolygonFileError(f"vertex {i}: coordinates must be finite, got {v!r}", i)
        pts.append((x, y))
    try:
        return ConvexPolygon(pts)
    except ConvexityError as exc:
        raise PolygonFileError(str(exc), exc.index) from None


def write_polygon(path: str | Path, poly: ConvexPolygon, meta: dict | None = None) -> None:
    # json writes floats with repr(), the shortest representation that round-trips
    Path(path).write_text(json.dumps(polygon_to_doc(poly, meta), indent=1) + "\n")


def read_polygon(path: str | Path) -> tuple[ConvexPolygon, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise PolygonFileError(f"{path}: not valid JSON ({exc})") from None
    return polygon_from_doc(doc), doc.get("meta", {}) if isinstance(doc, dict) else {}


def report_doc(kind: str, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **body}


def dump_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def census_from_dict(d: dict) -> TriangleCensus:
    d = dict(d)
    d["per_vertex_apex"] = tuple(d.get("per_vertex_apex", ()))
    return TriangleCensus(**d)


def stats_from_dict(d: dict) -> DistanceStats:
    return DistanceStats(
        per_vertex_distinct=tuple(d["per_vertex_distinct"]),
        max_distinct=d["max_distinct"],
        global_distinct=d["global_distinct"],
        unit_degree=tuple(d["unit_degree"]),
    )


def sums_from_dict(d: dict) -> DiagonalSums:
    return DiagonalSums(u=tuple(d["u"]), s_n=d["s_n"], perimeter=d["perimeter"])


def to_plain(obj):
    """Dataclasses and tuples to JSON-ready structures."""
    if hasattr(obj, "__dataclass_fields__"):
        return to_plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_plain(v) for v in items]
    return obj
