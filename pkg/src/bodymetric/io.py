"""JSON body and group-element formats.

Bodies::

    {"dim": 2, "kind": "convex-polygon", "vertices": [["0", "0"], ["1/2", "0"], ...]}
    {"dim": n, "kind": "union-of-boxes", "boxes": [{"lo": [...], "hi": [...]}, ...]}
    {"dim": n, "kind": "halfspaces", "rows": [{"a": [...], "b": "..."}, ...]}
    {"dim": n, "kind": "halfspace-union", "pieces": [{"rows": [...]}, ...]}

Coordinates are decimal or ``p/q`` strings (exact) or JSON numbers.  The last
kind is what affine images of box unions serialize to.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .bodies import GeneralBody
from .errors import BodyMetricError, InputError
from .geometry import ConvexPolygon, polygon_from_vertices
from .lattice import UnimodularAffine
from .numbers import number_str, parse_number


def _num(x, where: str):
    try:
        return parse_number(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: bad number {x!r}") from exc


def body_from_dict(d: dict):
    if not isinstance(d, dict):
        raise InputError("body must be a JSON object")
    kind = d.get("kind")
    dim = d.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"bad dim {dim!r}")
    try:
        if kind == "convex-polygon":
            if dim != 2:
                raise InputError("convex-polygon requires dim 2")
            pts = [tuple(_num(c, "vertices") for c in v) for v in d["vertices"]]
            return polygon_from_vertices(pts)
        if kind == "union-of-boxes":
            boxes = [
                (tuple(float(_num(c, "lo")) for c in b["lo"]), tuple(float(_num(c, "hi")) for c in b["hi"]))
                for b in d["boxes"]
            ]
            body = GeneralBody.from_boxes(boxes)
        elif kind == "halfspaces":
            body = GeneralBody.from_halfspaces(_rows(d["rows"]))
        elif kind == "halfspace-union":
            pieces = []
            for piece in d["pieces"]:
                rows = _rows(piece["rows"])
                pieces.append(([r[0] for r in rows], [r[1] for r in rows]))
            body = GeneralBody.from_pieces(dim, pieces)
        else:
            raise InputError(f"unknown body kind {kind!r}")
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc
    except InputError:
        raise
    except (BodyMetricError, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    if body.dim != dim:
        raise InputError(f"declared dim {dim} but data has dim {body.dim}")
    return body


def _rows(rows):
    return [(tuple(float(_num(c, "a")) for c in r["a"]), float(_num(r["b"], "b"))) for r in rows]


def body_to_dict(body) -> dict:
    if isinstance(body, ConvexPolygon):
        return {"dim": 2, "kind": "convex-polygon", "vertices": [[number_str(c) for c in v] for v in body.vertices]}
    if body.kind == "union-of-boxes":
        return {
            "dim": body.dim,
            "kind": "union-of-boxes",
            "boxes": [{"lo": [repr(c) for c in lo], "hi": [repr(c) for c in hi]} for lo, hi in body.boxes],
        }
    pieces = [
        {"rows": [{"a": [repr(float(c)) for c in a], "b": repr(float(bb))} for a, bb in zip(A, b)]}
        for A, b in body.pieces
    ]
    if len(pieces) == 1:
        return {"dim": body.dim, "kind": "halfspaces", "rows": pieces[0]["rows"]}
    return {"dim": body.dim, "kind": "halfspace-union", "pieces": pieces}


def read_json(path) -> tuple[dict, str]:
    """Parsed JSON and the sha256 of the raw bytes."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return data, hashlib.sha256(raw).hexdigest()


def load_body(path):
    data, digest = read_json(path)
    return body_from_dict(data), digest


def group_element_from_json(text_or_dict) -> UnimodularAffine:
    """Accepts an inline JSON string, a path to a JSON file, or a dict."""
    d = text_or_dict
    if isinstance(d, (str, Path)):
        s = str(d).strip()
        if s.startswith("{"):
            try:
                d = json.loads(s)
            except json.JSONDecodeError as exc:
                raise InputError(f"invalid group element JSON: {exc}") from exc
        else:
            d, _ = read_json(s)
    try:
        if any(isinstance(x, bool) or not isinstance(x, int) for row in d["A"] for x in row):
            raise InputError("matrix entries must be JSON integers")
        A = tuple(tuple(row) for row in d["A"])
        t = tuple(_num(x, "t") for x in d["t"])
        return UnimodularAffine(A, t)
    except KeyError as exc:
        raise InputError(f"group element missing field {exc}") from exc
    except InputError:
        raise
    except (BodyMetricError, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
