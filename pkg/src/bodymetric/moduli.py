"""Distance between AGL(n, Z)-orbits: inf over g of vol(P △ gQ).

The 2D search is a two-level branch and bound.  Matrices are enumerated up
to an entry bound that is proven sufficient for the current best value, and
for each surviving matrix the translation is handled by an adaptive
quadtree whose cells carry sound lower bounds:

* perimeter-Lipschitz: |d(t) - d(t')| <= perimeter(AQ) |t - t'|;
* slab: the overlap fits in a strip of width min_width(AQ) inside P;
* tangent plane: sqrt(area(P ∩ (AQ + t))) is concave in t on its support
  (Brunn-Minkowski), so its tangent plane at any point where it is
  differentiable bounds it from above everywhere.

Evaluation order and reductions never depend on the number of worker
threads, so results are reproducible bit for bit.
"""
from __future__ import annotations

import heapq
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bodies import GeneralBody, mc_sym_diff_volume, mc_volume
from .errors import BudgetExceeded, DimensionMismatch, NotUnimodular
from .geometry import (
    ConvexPolygon,
    _rotating_calipers,
    chain_area,
    clip_area,
    clip_polygon,
    convex_hull,
    hausdorff_distance,
    segment_length_inside,
    sym_diff_area,
)
from .lattice import (
    UnimodularAffine,
    apply,
    enumerate_gl2z,
    enumerate_glnz_words,
    identity_matrix,
    int_det,
)
from .numbers import fmt_sig

GOLDEN = (math.sqrt(5) - 1) / 2
# Offset of the evaluation point from a cell center, as a fraction of the
# half-side; keeps evaluations off the lattice where f may have kinks.
JITTER = (0.0123456789, 0.0098765432)
# Subtracted from every float lower bound to absorb rounding.
ROUNDING_SLACK = 1e-9


@dataclass(frozen=True)
class SearchConfig:
    entry_bound_cap: int = 12
    grid_step: float = 0.25
    tolerance: float | None = None  # absolute; None -> rel_tolerance * max area
    rel_tolerance: float = 1e-3
    refine_iters: int = 4
    mc_samples: int = 20_000
    seed: int = 0
    workers: int = 1
    batch_size: int = 16
    seed_entry_bound: int = 2
    max_cells: int = 200_000
    max_matrices: int = 20_000

    def __post_init__(self):
        for name in ("entry_bound_cap", "grid_step", "rel_tolerance", "mc_samples", "workers", "batch_size", "max_cells"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.tolerance is not None and self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")

    def tolerance_for(self, area_p: float, area_q: float) -> float:
        if self.tolerance is not None:
            return self.tolerance
        return self.rel_tolerance * max(area_p, area_q)


@dataclass
class OrbitDistanceResult:
    """Interval [lower_bound, upper_bound] containing the orbit distance."""

    upper_bound: float
    lower_bound: float
    witness: UnimodularAffine
    status: str  # "certified" or "heuristic"
    tolerance: float
    stats: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def to_dict(self) -> dict:
        return {
            "upper_bound": fmt_sig(self.upper_bound),
            "lower_bound": fmt_sig(self.lower_bound) if math.isfinite(self.lower_bound) else None,
            "witness": self.witness.to_dict(),
            "status": self.status,
            "tolerance": fmt_sig(self.tolerance),
            "stats": self.stats,
        }


# ---------------------------------------------------------------------------
# helpers on float vertex lists


def _fverts(P: ConvexPolygon):
    return [(float(x), float(y)) for x, y in P.vertices]


def _shift(vs, t):
    tx, ty = t
    return [(x + tx, y + ty) for x, y in vs]


def _linear_image(A, vs):
    (a, b), (c, d) = A
    out = [(a * x + b * y, c * x + d * y) for x, y in vs]
    if a * d - b * c < 0:
        out.reverse()
    return out


def _perimeter(vs):
    return sum(math.dist(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))


def _centroid(vs):
    n = len(vs)
    cx = cy = s = 0.0
    for i in range(n):
        x0, y0 = vs[i]
        x1, y1 = vs[(i + 1) % n]
        w = x0 * y1 - x1 * y0
        s += w
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    return cx / (3 * s), cy / (3 * s)


def _bbox(vs):
    xs = [v[0] for v in vs]
    ys = [v[1] for v in vs]
    return (min(xs), min(ys)), (max(xs), max(ys))


def overlap_gradient(pv, qv) -> tuple[float, float]:
    """Gradient in t of area(P ∩ (Q + t)) at t = 0 (Q already shifted).

    Each edge of Q moves with the translation; only its part inside P
    changes the overlap, at a rate given by its outward normal.
    """
    gx = gy = 0.0
    n = len(qv)
    for i in range(n):
        a, b = qv[i], qv[(i + 1) % n]
        L = segment_length_inside(a, b, pv)
        if L == 0.0:
            continue
        ex, ey = b[0] - a[0], b[1] - a[1]
        el = math.hypot(ex, ey)
        gx += L * ey / el
        gy += -L * ex / el
    return gx, gy


def _golden_min(phi, lo: float, hi: float, iters: int):
    """Golden-section search of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = phi(c), phi(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = phi(d)
    return (c, fc) if fc <= fd else (d, fd)


_DIRECTIONS = ((1.0, 0.0), (0.0, 1.0), (math.sqrt(0.5), math.sqrt(0.5)), (math.sqrt(0.5), -math.sqrt(0.5)))


def _local_refine(func, t, val, radius: float, rounds: int, counter: list):
    """Line searches along the axes and diagonals with a shrinking bracket."""
    for r in range(rounds):
        rad = radius * 0.5**r
        for dx, dy in _DIRECTIONS:
            x0, y0 = t

            def phi(s):
                counter[0] += 1
                return func((x0 + s * dx, y0 + s * dy))

            s, v = _golden_min(phi, -rad, rad, 40)
            if v < val:
                t, val = (x0 + s * dx, y0 + s * dy), v
    return t, val


# ---------------------------------------------------------------------------
# public 2D operations


def best_translation(P: ConvexPolygon, Q: ConvexPolygon, grid_step: float, refine_iters: int):
    """Grid scan plus local refinement of t -> vol(P △ (Q + t)).

    Returns ``(t, d_value, t_gap)``; the infimum over all t is at least
    ``d_value - t_gap`` where ``t_gap = perimeter(Q) * grid_step``.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    pv, qv = _fverts(P), _fverts(Q)
    aP, aQ = float(P.area), float(Q.area)
    counter = [0]

    def func(t):
        return aP + aQ - 2.0 * clip_area(pv, _shift(qv, t))

    t, val = _grid_scan(func, pv, qv, grid_step, counter)
    t, val = _local_refine(func, t, val, grid_step, refine_iters, counter)
    return t, val, _perimeter(qv) * grid_step


def _grid_scan(func, pv, qv, h, counter):
    (plx, ply), (phx, phy) = _bbox(pv)
    (qlx, qly), (qhx, qhy) = _bbox(qv)
    lox, loy = plx - qhx - h, ply - qhy - h
    nx = int(math.floor((phx - qlx + h - lox) / h)) + 1
    ny = int(math.floor((phy - qly + h - loy) / h)) + 1
    best_t, best_v = None, math.inf
    for i in range(nx):
        x = lox + i * h
        for j in range(ny):
            t = (x, loy + j * h)
            v = func(t)
            counter[0] += 1
            if v < best_v:
                best_t, best_v = t, v
    return best_t, best_v


def certified_entry_bound(P: ConvexPolygon, Q: ConvexPolygon, UB: float) -> int | None:
    """Largest matrix entry that can still give vol(P △ (AQ + t)) < UB.

    ``None`` when no finite bound follows (UB >= area P + area Q).
    """
    if UB <= 0:
        raise ValueError("UB must be positive")
    aP, aQ = float(P.area), float(Q.area)
    v_star = (aP + aQ - UB) / 2
    if v_star <= 0:
        return None
    r = Q.inradius_center[0]
    return int(math.floor(aQ * P.diameter / (v_star * r) + 1e-9))


def _entry_bound(aP, aQ, diamP, rQ, UB):
    if UB <= 0:
        return 0
    v_star = (aP + aQ - UB) / 2
    if v_star <= 0:
        return None
    return int(math.floor(aQ * diamP / (v_star * rQ) + 1e-9))


def _candidate_order(A) -> tuple:
    """Search order: by largest entry, identity first, then lexicographic."""
    I = identity_matrix(len(A))
    return (
        max(abs(x) for row in A for x in row),
        sum(abs(A[i][j] - I[i][j]) for i in range(len(A)) for j in range(len(A))),
        A,
    )


class _Pair:
    """Float data for P and Q shared by all matrix searches."""

    def __init__(self, P: ConvexPolygon, Q: ConvexPolygon):
        self.pv = _fverts(P)
        self.qv = _fverts(Q)
        self.aP = float(P.area)
        self.aQ = float(Q.area)
        self.floor = abs(self.aP - self.aQ)
        self.diamP = P.diameter
        self.wP = P.min_width
        self.rQ = Q.inradius_center[0]
        self.cP = _centroid(self.pv)

    def d(self, aqv, t) -> float:
        return self.aP + self.aQ - 2.0 * clip_area(self.pv, _shift(aqv, t))

    def slab_floor(self, aqv) -> float:
        d2, w2 = _rotating_calipers(aqv)
        cap = min(self.aP, self.aQ, math.sqrt(w2) * self.diamP, self.wP * math.sqrt(d2))
        return max(self.floor, self.aP + self.aQ - 2.0 * cap)

    def seeds(self, aqv, vertices: bool):
        cq = _centroid(aqv)
        out = [(self.cP[0] - cq[0], self.cP[1] - cq[1])]
        if vertices:
            out += [(p[0] - q[0], p[1] - q[1]) for p in self.pv for q in aqv]
        return out


def _search_matrix(pair: _Pair, A, threshold: float, tau: float, cfg: SearchConfig):
    """Certified translation search for one matrix.

    Returns a dict with ``ub`` (best value found, ``inf`` if the matrix was
    pruned without evaluation), ``t``, ``lb`` (sound lower bound on
    inf_t d(P, AQ + t), guaranteed >= min(threshold, ub) - tau unless the
    cell budget ran out) and counters.
    """
    aqv = _linear_image(A, pair.qv)
    base = pair.slab_floor(aqv)
    out = {"A": A, "ub": math.inf, "t": None, "lb": base, "evals": 0, "cells": 0, "pruned": False, "budget": False}
    if base >= threshold - tau:
        out["pruned"] = True
        return out

    aP, aQ = pair.aP, pair.aQ
    L = _perimeter(aqv)
    d2, w2 = _rotating_calipers(aqv)
    f_cap = min(aP, aQ, math.sqrt(w2) * pair.diamP, pair.wP * math.sqrt(d2))
    pv = pair.pv
    counter = [0]

    best_v, best_t = math.inf, None
    for t in pair.seeds(aqv, vertices=False):
        v = pair.d(aqv, t)
        counter[0] += 1
        if v < best_v:
            best_v, best_t = v, t

    # t gives a positive overlap exactly on the interior of this polygon
    support = convex_hull([(p[0] - q[0], p[1] - q[1]) for p in pv for q in aqv], exact=False)
    empty_lb = aP + aQ - ROUNDING_SLACK

    def evaluate(cx, cy, half):
        square = [(cx - half, cy - half), (cx + half, cy - half), (cx + half, cy + half), (cx - half, cy + half)]
        piece = clip_polygon(square, support)
        if chain_area(piece) <= 0.0:
            return math.inf, None, empty_lb
        px, py = cx + JITTER[0] * half, cy + JITTER[1] * half
        moved = _shift(aqv, (px, py))
        f = clip_area(pv, moved)
        if f <= 1e-12:
            # evaluation point outside the support: use the overlap region instead
            gx0, gy0 = _centroid(piece) if chain_area(piece) > 1e-15 else (cx, cy)
            px, py = gx0 + JITTER[0] * half * 1e-3, gy0 + JITTER[1] * half * 1e-3
            moved = _shift(aqv, (px, py))
            f = clip_area(pv, moved)
        val = aP + aQ - 2.0 * f
        ox, oy = abs(px - cx), abs(py - cy)
        lb = max(base, val - L * math.hypot(half + ox, half + oy))
        if f > 1e-12:
            gx, gy = overlap_gradient(pv, moved)
            h = math.sqrt(f)
            sx, sy = gx / (2 * h), gy / (2 * h)
            top = h + abs(sx) * half + sx * (cx - px) + abs(sy) * half + sy * (cy - py)
            f_up = min(f_cap, max(top, 0.0) ** 2)
            lb = max(lb, aP + aQ - 2.0 * f_up)
        return val, (px, py), lb - ROUNDING_SLACK

    (plx, ply), (phx, phy) = _bbox(pv)
    (qlx, qly), (qhx, qhy) = _bbox(aqv)
    lox, loy, hix, hiy = plx - qhx, ply - qhy, phx - qlx, phy - qly
    half0 = max(hix - lox, hiy - loy) / 2
    cx0, cy0 = (lox + hix) / 2, (loy + hiy) / 2

    heap = []
    val, tp, lb = evaluate(cx0, cy0, half0)
    counter[0] += 1
    if val < best_v:
        best_v, best_t = val, tp
    heapq.heappush(heap, (lb, 0, cx0, cy0, half0))
    discarded = math.inf
    cells = 1
    while heap:
        lb, depth, cx, cy, half = heap[0]
        U = min(threshold, best_v)
        if lb >= U - tau:
            discarded = min(discarded, lb)
            break
        if cells >= cfg.max_cells:
            discarded = min(discarded, lb)
            out["budget"] = True
            break
        heapq.heappop(heap)
        h2 = half / 2
        for ox in (-h2, h2):
            for oy in (-h2, h2):
                val, tp, clb = evaluate(cx + ox, cy + oy, h2)
                counter[0] += 1
                cells += 1
                if val < best_v:
                    best_v, best_t = val, tp
                if clb >= min(threshold, best_v) - tau:
                    discarded = min(discarded, clb)
                else:
                    heapq.heappush(heap, (clb, depth + 1, cx + ox, cy + oy, h2))
    if not heap:
        discarded = min(discarded, aP + aQ)

    if best_t is not None and best_v < threshold:
        best_t, best_v = _local_refine(lambda t: pair.d(aqv, t), best_t, best_v, cfg.grid_step, cfg.refine_iters, counter)

    out.update(ub=best_v, t=best_t, lb=max(base, min(discarded, best_v)), evals=counter[0], cells=cells)
    return out


def _witness_key(value, A, t):
    return (value, _candidate_order(A), t)


def moduli_distance_2d(P: ConvexPolygon, Q: ConvexPolygon, cfg: SearchConfig | None = None) -> OrbitDistanceResult:
    """Certified interval for inf over g in AGL(2, Z) of vol(P △ gQ).

    Raises :class:`BudgetExceeded` (carrying the heuristic result) when the
    entry bound exceeds ``cfg.entry_bound_cap`` or a cell budget ran out.
    """
    cfg = cfg or SearchConfig()
    if P.dim != 2 or Q.dim != 2:
        raise DimensionMismatch("polygons must be 2D")
    pair = _Pair(P, Q)
    tau = cfg.tolerance_for(pair.aP, pair.aQ)
    tau_work = 0.9 * tau
    I = identity_matrix(2)
    stats = {"examined": 0, "pruned": 0, "evaluations": 0, "cells": 0, "ub_history": [], "m_history": []}

    def bound(ub):
        return _entry_bound(pair.aP, pair.aQ, pair.diamP, pair.rQ, ub)

    # pass 1: an initial upper bound from cheap seeds
    t0, v0, _ = best_translation(P, Q, cfg.grid_step, cfg.refine_iters)
    best = (v0, I, t0)
    for t in pair.seeds(pair.qv, vertices=True):
        v = pair.d(pair.qv, t)
        stats["evaluations"] += 1
        if _witness_key(v, I, t) < _witness_key(*best):
            best = (v, I, t)
    M = bound(best[0])
    stats["ub_history"].append(fmt_sig(best[0]))
    stats["m_history"].append(M)
    seed_bound = min(cfg.seed_entry_bound, cfg.entry_bound_cap, M if M is not None else cfg.entry_bound_cap)
    for A in sorted(enumerate_gl2z(seed_bound), key=_candidate_order):
        if A == I:
            continue
        aqv = _linear_image(A, pair.qv)
        if pair.slab_floor(aqv) >= best[0] - tau_work:
            continue
        local = min((pair.d(aqv, t), t) for t in pair.seeds(aqv, vertices=True))
        stats["evaluations"] += len(pair.pv) * len(aqv) + 1
        if local[0] < best[0]:
            counter = [0]
            t, v = _local_refine(lambda s: pair.d(aqv, s), local[1], local[0], cfg.grid_step, cfg.refine_iters, counter)
            stats["evaluations"] += counter[0]
            best = (v, A, t)
            newM = bound(v)
            M = newM if M is None else (M if newM is None else min(M, newM))
            stats["ub_history"].append(fmt_sig(v))
            stats["m_history"].append(M)

    # pass 2: certified search over every matrix inside the entry bound
    threshold = best[0]
    limit = cfg.entry_bound_cap if M is None else min(M, cfg.entry_bound_cap)
    candidates = sorted(enumerate_gl2z(limit), key=_candidate_order)
    lb_all = math.inf
    budget_hit = False
    pool = ThreadPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        pos = 0
        while pos < len(candidates):
            cur = limit if M is None else min(limit, M)
            batch = []
            while pos < len(candidates) and len(batch) < cfg.batch_size:
                A = candidates[pos]
                pos += 1
                if max(abs(x) for row in A for x in row) <= cur:
                    batch.append(A)
            if not batch:
                continue
            run = lambda A: _search_matrix(pair, A, threshold, tau_work, cfg)  # noqa: E731
            results = list(pool.map(run, batch)) if pool else [run(A) for A in batch]
            for res in results:
                stats["examined"] += 1
                stats["pruned"] += res["pruned"]
                stats["evaluations"] += res["evals"]
                stats["cells"] += res["cells"]
                budget_hit |= res["budget"]
                lb_all = min(lb_all, res["lb"])
                if res["t"] is not None and _witness_key(res["ub"], res["A"], res["t"]) < _witness_key(*best):
                    best = (res["ub"], res["A"], res["t"])
            if best[0] < threshold:
                threshold = best[0]
                newM = bound(threshold)
                if newM is not None:
                    M = newM if M is None else min(M, newM)
                stats["ub_history"].append(fmt_sig(threshold))
                stats["m_history"].append(M)
    finally:
        if pool:
            pool.shutdown()

    ub, A, t = best
    witness = UnimodularAffine(A, t)
    complete = (M is not None and M <= cfg.entry_bound_cap and not budget_hit) or ub - pair.floor <= tau
    lb = max(pair.floor, min(lb_all, ub)) if complete else pair.floor
    lb = min(lb, ub)
    stats["entry_bound"] = M
    status = "certified" if complete and ub - lb <= tau else "heuristic"
    result = OrbitDistanceResult(ub, lb, witness, status, tau, stats)
    if status != "certified":
        raise BudgetExceeded(f"could not certify (entry bound {M}, cap {cfg.entry_bound_cap})", result)
    return result


# ---------------------------------------------------------------------------
# general dimension (heuristic)


def _word_depth(cap: int) -> int:
    return max(1, math.ceil(math.log2(cap + 1)))


def moduli_distance_nd(A: GeneralBody, B: GeneralBody, cfg: SearchConfig | None = None) -> OrbitDistanceResult:
    """Heuristic orbit distance for general bodies via Monte Carlo volumes.

    Matrices come from short generator words; translations start from
    bounding-box alignments and are refined per axis.  The only lower bound
    reported is the volume difference.
    """
    cfg = cfg or SearchConfig(entry_bound_cap=3)
    if A.dim != B.dim:
        raise DimensionMismatch(f"bodies in R^{A.dim} and R^{B.dim}")
    n = A.dim
    depth = _word_depth(cfg.entry_bound_cap)
    vA = A.exact_volume()
    vB = B.exact_volume()
    vA = vA if vA is not None else mc_volume(A, cfg.mc_samples, cfg.seed)[0]
    vB = vB if vB is not None else mc_volume(B, cfg.mc_samples, cfg.seed)[0]
    stats = {"examined": 0, "evaluations": 0, "depth": depth}

    def d(body, t):
        stats["evaluations"] += 1
        est, se = mc_sym_diff_volume(A, body.translated(t) if any(t) else body, cfg.mc_samples, cfg.seed)
        return est, se

    scored = []
    for idx, M in enumerate(enumerate_glnz_words(n, depth)):
        if idx >= cfg.max_matrices:
            break
        stats["examined"] += 1
        gB = apply(UnimodularAffine.linear(M), B)
        alo, ahi = A.bbox
        blo, bhi = gB.bbox
        seeds = [
            tuple(a - b for a, b in zip(alo, blo)),
            tuple((a0 + a1 - b0 - b1) / 2 for a0, a1, b0, b1 in zip(alo, ahi, blo, bhi)),
        ]
        best = None
        for t in seeds:
            est, se = d(gB, t)
            if best is None or (est, t) < (best[0], best[2]):
                best = (est, se, t)
        scored.append((best[0], idx, M, best[2], best[1], gB))
    scored.sort(key=lambda r: (r[0], r[1]))

    final = None
    for est, idx, M, t, se, gB in scored[:3]:
        t = list(t)
        for r in range(cfg.refine_iters):
            rad = cfg.grid_step * 0.5**r
            for k in range(n):
                def phi(s, k=k, t=t):
                    tt = list(t)
                    tt[k] += s
                    return d(gB, tuple(tt))[0]

                s, v = _golden_min(phi, -rad, rad, 12)
                if v < est:
                    t[k] += s
                    est = v
        se = d(gB, tuple(t))[1]
        if final is None or (est, idx) < (final[0], final[1]):
            final = (est, idx, M, tuple(t), se)

    est, idx, M, t, se = final
    stats["std_error"] = fmt_sig(se)
    result = OrbitDistanceResult(est, abs(vA - vB), UnimodularAffine(M, t), "heuristic", 4 * se, stats)
    if stats["examined"] >= cfg.max_matrices:
        raise BudgetExceeded("word enumeration truncated", result)
    return result


# ---------------------------------------------------------------------------
# Hausdorff degeneracy along an orbit


@dataclass(frozen=True)
class ProbeRow:
    m: int
    hausdorff: float
    sym_diff: object  # Fraction in exact mode


def hausdorff_orbit_probe(P: ConvexPolygon, Q: ConvexPolygon, A, m_max: int) -> list[ProbeRow]:
    """Hausdorff distance and symmetric difference of (A^m P, A^m Q), m = 0..m_max."""
    if int_det(A) not in (1, -1):
        raise NotUnimodular("A must have determinant ±1")
    g = UnimodularAffine.linear(A)
    rows = []
    Pm, Qm = P, Q
    for m in range(m_max + 1):
        rows.append(ProbeRow(m, hausdorff_distance(Pm, Qm), sym_diff_area(Pm, Qm)))
        Pm, Qm = apply(g, Pm), apply(g, Qm)
    return rows


# ---------------------------------------------------------------------------
# metric-axiom audit


@dataclass
class AxiomReport:
    names: list
    upper: dict  # (i, j) -> upper bound
    tolerance: dict  # (i, j) -> tau
    heuristic_pairs: list
    diagonal_max: float
    symmetry_gap: float
    triangle_worst: float  # max of d(a,b) - d(a,c) - d(c,b) - 3*tau
    quotient_worst: float  # max of upper bound - d(P, Q)
    invariance_worst: float  # max of |d(gP, Q) - d(P, Q)| - 2*tau
    triples_checked: int

    @property
    def ok(self) -> bool:
        return (
            self.symmetry_gap <= 0
            and self.triangle_worst <= 0
            and self.quotient_worst <= 1e-9
            and self.invariance_worst <= 0
            and all(self.diagonal_max <= tau for tau in self.tolerance.values() or [math.inf])
        )


def _random_element(rng: random.Random, mats) -> UnimodularAffine:
    A = rng.choice(mats)
    t = (Fraction(rng.randint(-8, 8), 4), Fraction(rng.randint(-8, 8), 4))
    return UnimodularAffine(A, t)


def axiom_report(corpus: Sequence, cfg: SearchConfig | None = None) -> AxiomReport:
    """Check symmetry, triangle inequality, d~ <= d and invariance on a corpus.

    ``corpus`` holds polygons or ``(name, polygon)`` pairs.  Pairs that fail
    to certify are listed in ``heuristic_pairs`` and left out of every check.
    """
    cfg = cfg or SearchConfig()
    items = [c if isinstance(c, tuple) else (f"P{i}", c) for i, c in enumerate(corpus)]
    names = [n for n, _ in items]
    polys = [p for _, p in items]
    k = len(polys)
    upper, tol, heuristic = {}, {}, []
    for i in range(k):
        for j in range(k):
            try:
                res = moduli_distance_2d(polys[i], polys[j], cfg)
            except BudgetExceeded as exc:
                heuristic.append((names[i], names[j]))
                res = exc.result
                tol[(i, j)] = res.tolerance
                continue
            upper[(i, j)] = res.upper_bound
            tol[(i, j)] = res.tolerance

    diag = max((upper[(i, i)] for i in range(k) if (i, i) in upper), default=0.0)
    sym = -math.inf
    quot = -math.inf
    for (i, j), u in upper.items():
        quot = max(quot, u - float(sym_diff_area(polys[i], polys[j])))
        if i < j and (j, i) in upper:
            sym = max(sym, abs(u - upper[(j, i)]) - max(tol[(i, j)], tol[(j, i)]))
    tri = -math.inf
    n_tri = 0
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if len({a, b, c}) < 3:
                    continue
                keys = [(a, b), (a, c), (c, b)]
                if not all(key in upper for key in keys):
                    continue
                n_tri += 1
                slack = upper[(a, b)] - upper[(a, c)] - upper[(c, b)]
                tri = max(tri, slack - 3 * max(tol[key] for key in keys))

    rng = random.Random(cfg.seed)
    mats = list(enumerate_gl2z(2))
    inv = -math.inf
    for i in range(k):
        j = (i + 1) % k
        if (i, j) not in upper:
            continue
        g = _random_element(rng, mats)
        try:
            res = moduli_distance_2d(apply(g, polys[i]), polys[j], cfg)
        except BudgetExceeded:
            continue
        inv = max(inv, abs(res.upper_bound - upper[(i, j)]) - 2 * tol[(i, j)])

    return AxiomReport(
        names=names,
        upper=upper,
        tolerance=tol,
        heuristic_pairs=heuristic,
        diagonal_max=diag,
        symmetry_gap=sym,
        triangle_worst=tri,
        quotient_worst=quot,
        invariance_worst=inv,
        triples_checked=n_tri,
    )
