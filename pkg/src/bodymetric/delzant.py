"""Delzant checks for polygons: rational edges whose primitive directions
form a Z^2 basis at every vertex."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import IrrationalDirection
from .geometry import ConvexPolygon, polygon_from_vertices
from .numbers import is_exact, number_str

MAX_DENOMINATOR = 10**6


def _as_fraction(x) -> Fraction:
    if is_exact(x):
        return Fraction(x)
    x = float(x)
    fr = Fraction(x).limit_denominator(MAX_DENOMINATOR)
    # best approximations of irrationals with this denominator are still ~1e-12 off
    if abs(float(fr) - x) > 1e-14 * max(1.0, abs(x)):
        raise IrrationalDirection(f"{x!r} has no rational form with denominator <= {MAX_DENOMINATOR}")
    return fr


def primitive_direction(v) -> tuple[int, int]:
    """Coprime integer vector positively proportional to ``v``.

    >>> primitive_direction((Fraction(1, 2), Fraction(1, 3)))
    (3, 2)
    """
    fx, fy = (_as_fraction(c) for c in v)
    if fx == 0 and fy == 0:
        raise ValueError("zero vector has no direction")
    scale = lcm(fx.denominator, fy.denominator)
    x, y = int(fx * scale), int(fy * scale)
    g = gcd(x, y)
    return x // g, y // g


@dataclass(frozen=True)
class VertexRecord:
    index: int
    vertex: tuple
    directions: tuple  # edge vectors to the next and previous vertex
    primitive: tuple | None
    determinant: int | None
    error: str | None = None

    @property
    def smooth(self) -> bool:
        return self.determinant is not None and abs(self.determinant) == 1

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "vertex": [number_str(c) for c in self.vertex],
            "directions": [[number_str(c) for c in d] for d in self.directions],
            "primitive": [list(p) for p in self.primitive] if self.primitive else None,
            "determinant": self.determinant,
            "error": self.error,
        }


@dataclass(frozen=True)
class DelzantReport:
    is_delzant: bool
    vertices: tuple
    first_failure: int | None

    def to_dict(self) -> dict:
        return {
            "is_delzant": self.is_delzant,
            "first_failure": self.first_failure,
            "vertices": [r.to_dict() for r in self.vertices],
        }


def is_delzant(P: ConvexPolygon) -> DelzantReport:
    """Per-vertex smoothness check.  Polygons are always simple in 2D."""
    vs = P.vertices
    n = len(vs)
    records = []
    first = None
    for i in range(n):
        v, nxt, prv = vs[i], vs[(i + 1) % n], vs[i - 1]
        u = (nxt[0] - v[0], nxt[1] - v[1])
        w = (prv[0] - v[0], prv[1] - v[1])
        try:
            pu, pw = primitive_direction(u), primitive_direction(w)
        except IrrationalDirection as exc:
            rec = VertexRecord(i, v, (u, w), None, None, str(exc))
        else:
            det = pu[0] * pw[1] - pu[1] * pw[0]
            rec = VertexRecord(i, v, (u, w), (pu, pw), det)
        if not rec.smooth and first is None:
            first = i
        records.append(rec)
    return DelzantReport(first is None, tuple(records), first)


def vertex_count_stratum(P: ConvexPolygon) -> int:
    return len(P.vertices)


def _rect(w, h):
    return polygon_from_vertices([(0, 0), (w, 0), (w, h), (0, h)])


def standard_corpus() -> dict[str, ConvexPolygon]:
    """Named Delzant fixtures, checked on every call."""
    F = Fraction
    corpus = {
        "unit-square": _rect(1, 1),
        "simplex": polygon_from_vertices([(0, 0), (1, 0), (0, 1)]),
        "simplex-2": polygon_from_vertices([(0, 0), (2, 0), (0, 2)]),
        "simplex-3": polygon_from_vertices([(0, 0), (3, 0), (0, 3)]),
        "square-2": _rect(2, 2),
        "hirzebruch-1": polygon_from_vertices([(0, 0), (2, 0), (1, 1), (0, 1)]),
    }
    for m in range(2, 6):
        corpus[f"rect-1-over-{m}"] = _rect(1, F(1, m))
    for name, P in corpus.items():
        if not is_delzant(P).is_delzant:
            raise AssertionError(f"fixture {name} is not Delzant")
    return corpus
