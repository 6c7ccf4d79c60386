"""Independent brute-force references used to freeze and check values.

Nothing here imports the clipping, calipers or enumeration code under test.
"""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_vertices_bruteforce(points) -> set:
    """Extreme points: p is extreme iff it is not in any triangle/segment of the others."""
    pts = list(set(tuple(p) for p in points))
    out = set()
    for p in pts:
        others = [q for q in pts if q != p]
        inside = False
        for a, b, c in itertools.combinations(others, 3):
            s = [cross(a, b, p), cross(b, c, p), cross(c, a, p)]
            if (all(x >= 0 for x in s) or all(x <= 0 for x in s)) and cross(a, b, c) != 0:
                inside = True
                break
        if not inside:
            for a, b in itertools.combinations(others, 2):
                if cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
                    inside = True
                    break
        if not inside:
            out.add(p)
    return out


def shoelace(vs):
    n = len(vs)
    return abs(sum(vs[i][0] * vs[(i + 1) % n][1] - vs[(i + 1) % n][0] * vs[i][1] for i in range(n))) / 2


def inside_convex(p, vs, strict=False):
    n = len(vs)
    s = [cross(vs[i], vs[(i + 1) % n], p) for i in range(n)]
    if strict:
        return all(x > 0 for x in s)
    return all(x >= 0 for x in s)


def raster_area(vs, cells: int = 400) -> float:
    """Midpoint-rule area estimate on a cells x cells grid over the bbox."""
    xs, ys = [float(v[0]) for v in vs], [float(v[1]) for v in vs]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    gx = x0 + (np.arange(cells) + 0.5) * (x1 - x0) / cells
    gy = y0 + (np.arange(cells) + 0.5) * (y1 - y0) / cells
    X, Y = np.meshgrid(gx, gy)
    mask = np.ones_like(X, dtype=bool)
    fv = [(float(a), float(b)) for a, b in vs]
    for i in range(len(fv)):
        a, b = fv[i], fv[(i + 1) % len(fv)]
        mask &= (b[0] - a[0]) * (Y - a[1]) - (b[1] - a[1]) * (X - a[0]) >= 0
    return mask.mean() * (x1 - x0) * (y1 - y0)


def exact_rect_intersection(r1, r2):
    """Axis-parallel boxes ((x0, y0), (x1, y1)); exact area of the overlap."""
    w = min(r1[1][0], r2[1][0]) - max(r1[0][0], r2[0][0])
    h = min(r1[1][1], r2[1][1]) - max(r1[0][1], r2[0][1])
    return max(w, 0) * max(h, 0)


# ---------------------------------------------------------------------------
# vectorized intersection area over many translations


def intersection_areas(pv, qv, T: np.ndarray) -> np.ndarray:
    """area(P ∩ (Q + t)) for every row t of T.

    Candidate points are vertices of each polygon inside the other plus all
    edge/edge crossings; they are sorted by angle about their mean and fed to
    the shoelace formula.  Both polygons must be counterclockwise.
    """
    P = np.asarray(pv, float)
    Q0 = np.asarray(qv, float)
    T = np.asarray(T, float)
    n, m, k = len(P), len(Q0), len(T)
    Q = Q0[None, :, :] + T[:, None, :]  # (k, m, 2)
    Pn = np.roll(P, -1, axis=0)
    Qn = np.roll(Q, -1, axis=1)
    eps = 1e-12

    # P vertices inside Q + t
    dq = Qn - Q  # (k, m, 2)
    rel = P[None, :, None, :] - Q[:, None, :, :]  # (k, n, m, 2)
    cr = dq[:, None, :, 0] * rel[..., 1] - dq[:, None, :, 1] * rel[..., 0]
    p_in = (cr >= -eps).all(axis=2)  # (k, n)
    # Q vertices inside P
    dp = Pn - P
    rel2 = Q[:, :, None, :] - P[None, None, :, :]  # (k, m, n, 2)
    cr2 = dp[None, None, :, 0] * rel2[..., 1] - dp[None, None, :, 1] * rel2[..., 0]
    q_in = (cr2 >= -eps).all(axis=2)  # (k, m)
    # edge crossings: P[i] + s dp[i] = Q[j] + u dq[j]
    d_p = dp[None, :, None, :]  # (1, n, 1, 2)
    d_q = dq[:, None, :, :]  # (k, 1, m, 2)
    den = d_p[..., 0] * d_q[..., 1] - d_p[..., 1] * d_q[..., 0]  # (k, n, m)
    w = Q[:, None, :, :] - P[None, :, None, :]  # (k, n, m, 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (w[..., 0] * d_q[..., 1] - w[..., 1] * d_q[..., 0]) / den
        u = (w[..., 0] * d_p[..., 1] - w[..., 1] * d_p[..., 0]) / den
    ok = (np.abs(den) > eps) & (s >= -eps) & (s <= 1 + eps) & (u >= -eps) & (u <= 1 + eps)
    X = P[None, :, None, :] + np.where(ok, s, 0)[..., None] * d_p

    pts = np.concatenate(
        [np.broadcast_to(P, (k, n, 2)), Q, X.reshape(k, n * m, 2)], axis=1
    )
    valid = np.concatenate([p_in, q_in, ok.reshape(k, n * m)], axis=1)
    cnt = valid.sum(axis=1)
    c = (pts * valid[..., None]).sum(axis=1) / np.maximum(cnt, 1)[:, None]
    ang = np.arctan2(pts[..., 1] - c[:, None, 1], pts[..., 0] - c[:, None, 0])
    ang = np.where(valid, ang, np.inf)
    order = np.argsort(ang, axis=1, kind="stable")
    sp = np.take_along_axis(pts, order[..., None], axis=1)
    last = np.take_along_axis(sp, np.maximum(cnt - 1, 0)[:, None, None].repeat(2, axis=2), axis=1)
    pos = np.arange(sp.shape[1])[None, :]
    sp = np.where((pos < cnt[:, None])[..., None], sp, last)
    nx = np.roll(sp, -1, axis=1)
    area = 0.5 * (sp[..., 0] * nx[..., 1] - nx[..., 0] * sp[..., 1]).sum(axis=1)
    return np.where(cnt >= 3, np.abs(area), 0.0)


# ---------------------------------------------------------------------------
# Hausdorff and width


def point_polygon_distance(p, vs) -> float:
    if inside_convex(p, vs):
        return 0.0
    best = math.inf
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        dx, dy = b[0] - a[0], b[1] - a[1]
        L = dx * dx + dy * dy
        s = max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L))
        best = min(best, math.hypot(p[0] - a[0] - s * dx, p[1] - a[1] - s * dy))
    return best


def hausdorff_dense(pv, qv, per_edge: int = 400) -> float:
    """Boundary sampling; a lower bound that converges as per_edge grows."""
    pv = [(float(x), float(y)) for x, y in pv]
    qv = [(float(x), float(y)) for x, y in qv]

    def directed(A, B):
        best = 0.0
        for i in range(len(A)):
            a, b = A[i], A[(i + 1) % len(A)]
            for s in np.linspace(0, 1, per_edge, endpoint=False):
                p = (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))
                best = max(best, point_polygon_distance(p, B))
        return best

    return max(directed(pv, qv), directed(qv, pv))


def width_over_directions(vs, k: int = 20000) -> float:
    th = np.linspace(0, math.pi, k, endpoint=False)
    V = np.asarray(vs, float)
    proj = V @ np.stack([np.cos(th), np.sin(th)])
    return float((proj.max(axis=0) - proj.min(axis=0)).min())


def diameter_bruteforce(vs) -> float:
    return max(math.dist(tuple(map(float, a)), tuple(map(float, b))) for a in vs for b in vs)


# ---------------------------------------------------------------------------
# groups and random polygons


def gl2z_exhaustive(M: int) -> list:
    """All integer 2x2 matrices with |entries| <= M and det = ±1, lexicographic."""
    r = range(-M, M + 1)
    return [((a, b), (c, d)) for a, b, c, d in itertools.product(r, r, r, r) if a * d - b * c in (1, -1)]


def random_lattice_polygon(rng: random.Random, box: int = 3, min_area: float = 1, max_area: float = 6):
    """Counterclockwise hull of random lattice points with area in range."""
    while True:
        pts = {(rng.randint(0, box), rng.randint(0, box)) for _ in range(rng.randint(3, 7))}
        hv = hull_vertices_bruteforce(pts)
        if len(hv) < 3:
            continue
        c = (sum(p[0] for p in hv) / len(hv), sum(p[1] for p in hv) / len(hv))
        vs = sorted(hv, key=lambda p: math.atan2(p[1] - c[1], p[0] - c[0]))
        a = shoelace(vs)
        if min_area <= a <= max_area:
            return [(Fraction(x), Fraction(y)) for x, y in vs]


def random_unimodular(rng: random.Random, bound: int):
    while True:
        A = tuple(tuple(rng.randint(-bound, bound) for _ in range(2)) for _ in range(2))
        if A[0][0] * A[1][1] - A[0][1] * A[1][0] in (1, -1):
            return A


def edge_width(vs) -> float:
    """Minimal width, attained in the normal direction of some edge."""
    n = len(vs)
    best = math.inf
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        L = math.dist(a, b)
        best = min(best, max(abs(cross(a, b, p)) for p in vs) / L)
    return best


def overlap_ceiling(pv, qv) -> float:
    """max over t of area(P ∩ (Q + t)) is at most this: the overlap fits in a
    slab of either polygon's width and has extent at most the other's diameter."""
    return min(
        shoelace(pv),
        shoelace(qv),
        edge_width(qv) * diameter_bruteforce(pv),
        edge_width(pv) * diameter_bruteforce(qv),
    )


def linear_image(A, vs):
    out = [(A[0][0] * x + A[0][1] * y, A[1][0] * x + A[1][1] * y) for x, y in vs]
    return out[::-1] if A[0][0] * A[1][1] - A[0][1] * A[1][0] < 0 else out


def support_grid(pv, qv, h: float) -> np.ndarray:
    """Grid points of spacing h (anchored at 0) covering {p - q}; elsewhere the overlap is 0."""
    S = np.array([(p[0] - q[0], p[1] - q[1]) for p in pv for q in qv])
    xs = np.arange(math.floor(S[:, 0].min() / h), math.ceil(S[:, 0].max() / h) + 1) * h
    ys = np.arange(math.floor(S[:, 1].min() / h), math.ceil(S[:, 1].max() / h) + 1) * h
    X, Y = np.meshgrid(xs, ys)
    return np.stack([X.ravel(), Y.ravel()], 1)


def grid_min_distance(pv, qv, h: float) -> tuple[float, tuple]:
    """min over the h-grid of area P + area Q - 2 area(P ∩ (Q + t)), chunked."""
    aP, aQ = shoelace(pv), shoelace(qv)
    T = support_grid(pv, qv, h)
    best, arg = math.inf, None
    for s in range(0, len(T), 4096):
        ov = intersection_areas(pv, qv, T[s : s + 4096])
        i = int(np.argmax(ov))
        v = aP + aQ - 2 * ov[i]
        if v < best:
            best, arg = v, tuple(T[s + i])
    return best, arg
