"""Exact 2D convex-polygon geometry.

Polygons carry either exact :class:`~fractions.Fraction` coordinates (when
every input coordinate is rational) or floats.  All predicates are exact in
the rational case; in the float case orientation tests treat a triple as
collinear when the sine of the turn angle is below ``GEOM_TOL``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DegenerateBody, DimensionMismatch, TooFewPoints
from .numbers import GEOM_TOL, Number, all_exact

Point = tuple  # (x, y) of one number kind


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _turn(o, a, b, exact: bool) -> int:
    """Sign of the turn o -> a -> b (+1 left, -1 right, 0 collinear)."""
    c = _cross(o, a, b)
    if exact:
        return (c > 0) - (c < 0)
    ax, ay = a[0] - o[0], a[1] - o[1]
    bx, by = b[0] - o[0], b[1] - o[1]
    scale = math.hypot(ax, ay) * math.hypot(bx, by)
    if abs(c) <= GEOM_TOL * scale:
        return 0
    return 1 if c > 0 else -1


def _shoelace2(pts: Sequence[Point]):
    """Twice the signed area."""
    s = 0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s


def _canonical_rotation(pts: list) -> tuple:
    k = min(range(len(pts)), key=lambda i: pts[i])
    return tuple(pts[k:] + pts[:k])


def _drop_collinear(pts: list, exact: bool) -> list:
    """Remove duplicate and collinear vertices from a closed CCW chain, one at a time."""
    pts = list(pts)
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        for i in range(n):
            if pts[i] == pts[i - 1] or _turn(pts[i - 1], pts[i], pts[(i + 1) % n], exact) <= 0:
                del pts[i]
                changed = True
                break
    return pts


def convex_hull(points: Iterable[Point], exact: bool) -> list:
    """Andrew's monotone chain; CCW, strictly convex (collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and _turn(chain[-2], chain[-1], p, exact) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


class _EmptyType:
    """Marker for an empty intersection (area 0, no vertices)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    area = Fraction(0)
    vertices = ()

    def __repr__(self):
        return "EMPTY"

    def __bool__(self):
        return False


EMPTY = _EmptyType()


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Strictly convex polygon, CCW, lexicographically smallest vertex first.

    Build instances with :func:`polygon_from_vertices`; the constructor
    assumes its input is already canonical.
    """

    vertices: tuple
    exact: bool

    def __eq__(self, other):
        if not isinstance(other, ConvexPolygon):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        vs = ", ".join(f"({x}, {y})" for x, y in self.vertices)
        return f"ConvexPolygon([{vs}])"

    @property
    def dim(self) -> int:
        return 2

    @cached_property
    def area(self) -> Number:
        return _shoelace2(self.vertices) / 2

    @cached_property
    def perimeter(self) -> float:
        vs = self.vertices
        return sum(math.dist(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    @cached_property
    def _calipers(self):
        return _rotating_calipers(self.vertices)

    @property
    def diameter_sq(self) -> Number:
        return self._calipers[0]

    @property
    def min_width_sq(self) -> Number:
        return self._calipers[1]

    @cached_property
    def diameter(self) -> float:
        return math.sqrt(self._calipers[0])

    @cached_property
    def min_width(self) -> float:
        return math.sqrt(self._calipers[1])

    @cached_property
    def inradius_center(self) -> tuple[float, tuple[float, float]]:
        return _chebyshev(self.to_float().vertices)

    @cached_property
    def bbox(self) -> tuple:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys)), (max(xs), max(ys))

    @cached_property
    def centroid(self) -> tuple:
        vs = self.vertices
        n = len(vs)
        cx = cy = 0
        for i in range(n):
            x0, y0 = vs[i]
            x1, y1 = vs[(i + 1) % n]
            w = x0 * y1 - x1 * y0
            cx += (x0 + x1) * w
            cy += (y0 + y1) * w
        a6 = 3 * _shoelace2(vs)
        return (cx / a6, cy / a6)

    def to_float(self) -> "ConvexPolygon":
        if not self.exact:
            return self
        return ConvexPolygon(tuple((float(x), float(y)) for x, y in self.vertices), False)

    def translated(self, t) -> "ConvexPolygon":
        tx, ty = t
        exact = self.exact and all_exact((tx, ty))
        if exact:
            tx, ty = Fraction(tx), Fraction(ty)
            vs = tuple((x + tx, y + ty) for x, y in self.vertices)
        else:
            tx, ty = float(tx), float(ty)
            vs = tuple((float(x) + tx, float(y) + ty) for x, y in self.vertices)
        return ConvexPolygon(vs, exact)

    def contains_point(self, p) -> bool:
        """Closed containment (boundary counts as inside)."""
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            if _turn(vs[i], vs[(i + 1) % n], p, self.exact) < 0:
                return False
        return True


def polygon_from_vertices(points: Iterable[Sequence]) -> ConvexPolygon:
    """Convex hull of ``points`` in canonical form.

    >>> polygon_from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)]).area
    Fraction(1, 1)
    """
    raw = [tuple(p) for p in points]
    for p in raw:
        if len(p) != 2:
            raise DimensionMismatch(f"expected 2D points, got {p!r}")
    exact = all_exact(c for p in raw for c in p)
    if exact:
        pts = [(Fraction(x), Fraction(y)) for x, y in raw]
    else:
        pts = [(float(x), float(y)) for x, y in raw]
        if not all(math.isfinite(c) for p in pts for c in p):
            raise ValueError("non-finite coordinate")
    if len(set(pts)) < 3:
        raise TooFewPoints(f"need at least 3 distinct points, got {len(set(pts))}")
    hull = convex_hull(pts, exact)
    if not exact:
        hull = _drop_collinear(hull, exact)
    if len(hull) < 3 or _shoelace2(hull) <= 0:
        raise DegenerateBody("convex hull has zero area")
    return ConvexPolygon(_canonical_rotation(hull), exact)


def _polygon_from_chain(pts: list, exact: bool):
    """Canonicalize a CCW convex chain (output of clipping / affine maps)."""
    pts = _drop_collinear(list(pts), exact)
    if len(pts) < 3 or _shoelace2(pts) <= 0:
        return EMPTY
    return ConvexPolygon(_canonical_rotation(pts), exact)


def area(P) -> Number:
    return P.area


def perimeter(P: ConvexPolygon) -> float:
    return P.perimeter


def diameter(P: ConvexPolygon) -> float:
    return P.diameter


def min_width(P: ConvexPolygon) -> float:
    return P.min_width


def inradius_center(P: ConvexPolygon) -> tuple[float, tuple[float, float]]:
    return P.inradius_center


def _common_kind(P: ConvexPolygon, Q: ConvexPolygon):
    if P.exact and Q.exact:
        return P, Q, True
    return P.to_float(), Q.to_float(), False


def convex_intersection(P: ConvexPolygon, Q: ConvexPolygon):
    """P ∩ Q by clipping P against each edge of Q; ``EMPTY`` if it has no area."""
    P, Q, exact = _common_kind(P, Q)
    out = list(P.vertices)
    qs = Q.vertices
    m = len(qs)
    for i in range(m):
        a, b = qs[i], qs[(i + 1) % m]
        if not out:
            break
        inp, out = out, []
        s = inp[-1]
        s_side = _cross(a, b, s)
        for e in inp:
            e_side = _cross(a, b, e)
            if e_side >= 0:
                if s_side < 0:
                    out.append(_seg_line(s, e, s_side, e_side))
                out.append(e)
            elif s_side >= 0:
                out.append(_seg_line(s, e, s_side, e_side))
            s, s_side = e, e_side
    if len(out) < 3:
        return EMPTY
    return _polygon_from_chain(out, exact)


def _seg_line(s, e, ds, de):
    """Point on segment s-e where the signed side value crosses zero."""
    lam = ds / (ds - de)
    return (s[0] + (e[0] - s[0]) * lam, s[1] + (e[1] - s[1]) * lam)


def sym_diff_area(P: ConvexPolygon, Q: ConvexPolygon) -> Number:
    """Area of the symmetric difference, exact when both inputs are rational."""
    inter = convex_intersection(P, Q)
    if P.exact and Q.exact:
        return P.area + Q.area - 2 * inter.area
    return float(P.area) + float(Q.area) - 2 * float(inter.area)


def _rotating_calipers(vs: Sequence[Point]):
    """(diameter², min_width²) of a strictly convex CCW polygon."""
    n = len(vs)
    j = 1
    best_d = 0
    best_w = None
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        while _cross(a, b, vs[(j + 1) % n]) > _cross(a, b, vs[j]):
            j = (j + 1) % n
        h = _cross(a, b, vs[j])
        el = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
        w = h * h / el
        if best_w is None or w < best_w:
            best_w = w
        for p in (a, b):
            for q in (vs[j], vs[(j + 1) % n]):
                d = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
                if d > best_d:
                    best_d = d
    return best_d, best_w


def _chebyshev(vs: Sequence[tuple[float, float]]):
    """Largest inscribed disc from all edge triples; ties -> smallest center."""
    n = len(vs)
    rows = []
    for i in range(n):
        (x0, y0), (x1, y1) = vs[i], vs[(i + 1) % n]
        ex, ey = x1 - x0, y1 - y0
        L = math.hypot(ex, ey)
        nx, ny = ey / L, -ex / L  # outward normal of a CCW edge
        rows.append((nx, ny, nx * x0 + ny * y0))
    best = None
    for i, j, k in itertools.combinations(range(n), 3):
        sol = _solve3([rows[i], rows[j], rows[k]])
        if sol is None:
            continue
        cx, cy, r = sol
        if r <= 0:
            continue
        if any(nx * cx + ny * cy + r > c + 1e-9 for nx, ny, c in rows):
            continue
        cand = (r, (cx, cy))
        if best is None or r > best[0] + 1e-12 or (abs(r - best[0]) <= 1e-12 and (cx, cy) < best[1]):
            best = cand
    if best is None:
        raise DegenerateBody("no inscribed disc found")
    return best


def _solve3(rows):
    """Solve n·x + r = c for three (nx, ny, c) rows by Cramer's rule."""
    (a1, b1, c1), (a2, b2, c2), (a3, b3, c3) = rows
    det = a1 * (b2 - b3) - b1 * (a2 - a3) + (a2 * b3 - a3 * b2)
    if abs(det) < 1e-12:
        return None
    dx = c1 * (b2 - b3) - b1 * (c2 - c3) + (c2 * b3 - c3 * b2)
    dy = a1 * (c2 - c3) - c1 * (a2 - a3) + (a2 * c3 - a3 * c2)
    dr = a1 * (b2 * c3 - b3 * c2) - b1 * (a2 * c3 - a3 * c2) + c1 * (a2 * b3 - a3 * b2)
    return dx / det, dy / det, dr / det


def _point_poly_dist_sq(p, vs, exact: bool):
    n = len(vs)
    inside = True
    best = None
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if _cross(a, b, p) < 0:
            inside = False
        ex, ey = b[0] - a[0], b[1] - a[1]
        px, py = p[0] - a[0], p[1] - a[1]
        el = ex * ex + ey * ey
        s = (px * ex + py * ey) / el
        if s <= 0:
            d = px * px + py * py
        elif s >= 1:
            d = (p[0] - b[0]) ** 2 + (p[1] - b[1]) ** 2
        else:
            c = px * ey - py * ex
            d = c * c / el
        if best is None or d < best:
            best = d
    return 0 if inside else best


def directed_hausdorff(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    """sup over x in P of dist(x, Q); attained at a vertex of P since Q is convex."""
    P, Q, exact = _common_kind(P, Q)
    return math.sqrt(max(_point_poly_dist_sq(v, Q.vertices, exact) for v in P.vertices))


def hausdorff_distance(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    return max(directed_hausdorff(P, Q), directed_hausdorff(Q, P))


@dataclass(frozen=True)
class Hyperplane:
    """The affine hyperplane ``normal · x = offset`` with a unit normal."""

    normal: tuple[float, ...]
    offset: float

    def __post_init__(self):
        nrm = math.sqrt(sum(float(c) ** 2 for c in self.normal))
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"normal must be a unit vector (norm {nrm!r})")

    @classmethod
    def from_equation(cls, a: Sequence[float], b: float) -> "Hyperplane":
        """Normalize ``a · x = b``."""
        nrm = math.sqrt(sum(float(c) ** 2 for c in a))
        if nrm == 0:
            raise ValueError("zero normal")
        return cls(tuple(float(c) / nrm for c in a), float(b) / nrm)

    @property
    def dim(self) -> int:
        return len(self.normal)

    def distance(self, x: Sequence[float]) -> float:
        return abs(sum(n * float(c) for n, c in zip(self.normal, x)) - self.offset)


def cube_vertex_gap(a: float, n: int, H: Hyperplane) -> tuple[float, tuple[float, ...]]:
    """Max distance from a vertex of [-2a, 2a]^n to H, with a maximizing vertex.

    Ties go to the first vertex in ``itertools.product`` order.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if H.dim != n:
        raise DimensionMismatch(f"hyperplane in R^{H.dim}, cube in R^{n}")
    best, arg = -1.0, None
    for v in itertools.product((-2 * a, 2 * a), repeat=n):
        d = H.distance(v)
        if d > best:
            best, arg = d, v
    return best, arg


# ---------------------------------------------------------------------------
# float kernels for the orbit search (no object construction per call)


def clip_polygon(pv: Sequence[tuple[float, float]], qv: Sequence[tuple[float, float]]) -> list:
    """Vertices of P ∩ Q for CCW float vertex lists (possibly degenerate)."""
    out = list(pv)
    m = len(qv)
    for i in range(m):
        ax, ay = qv[i]
        bx, by = qv[(i + 1) % m]
        dx, dy = bx - ax, by - ay
        inp, out = out, []
        if not inp:
            return out
        sx, sy = inp[-1]
        ss = dx * (sy - ay) - dy * (sx - ax)
        for ex, ey in inp:
            es = dx * (ey - ay) - dy * (ex - ax)
            if es >= 0:
                if ss < 0:
                    lam = ss / (ss - es)
                    out.append((sx + (ex - sx) * lam, sy + (ey - sy) * lam))
                out.append((ex, ey))
            elif ss >= 0:
                lam = ss / (ss - es)
                out.append((sx + (ex - sx) * lam, sy + (ey - sy) * lam))
            sx, sy, ss = ex, ey, es
    return out


def chain_area(vs) -> float:
    n = len(vs)
    if n < 3:
        return 0.0
    s = 0.0
    for i in range(n):
        x0, y0 = vs[i]
        x1, y1 = vs[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return max(s * 0.5, 0.0)


def clip_area(pv: Sequence[tuple[float, float]], qv: Sequence[tuple[float, float]]) -> float:
    """Area of P ∩ Q for CCW float vertex lists."""
    return chain_area(clip_polygon(pv, qv))


def segment_length_inside(a, b, pv) -> float:
    """Length of segment a-b inside the convex CCW polygon ``pv`` (Cyrus-Beck)."""
    t0, t1 = 0.0, 1.0
    dx, dy = b[0] - a[0], b[1] - a[1]
    n = len(pv)
    for i in range(n):
        px, py = pv[i]
        qx, qy = pv[(i + 1) % n]
        ex, ey = qx - px, qy - py
        # inside: ex*(y-py) - ey*(x-px) >= 0
        num = ex * (a[1] - py) - ey * (a[0] - px)
        den = ex * dy - ey * dx
        if den == 0:
            if num < 0:
                return 0.0
            continue
        t = -num / den
        if den > 0:
            if t > t0:
                t0 = t
        elif t < t1:
            t1 = t
        if t0 >= t1:
            return 0.0
    return (t1 - t0) * math.hypot(dx, dy)
