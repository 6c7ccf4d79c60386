"""General n-dimensional bodies given by an indicator, and Monte Carlo volumes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.random import Philox
from scipy.optimize import linprog

from .errors import DegenerateBody, DimensionMismatch, UnboundedBody

CHUNK = 1 << 16


def _box_subtract(a, b):
    """Boxes with disjoint interiors covering box a minus box b."""
    alo, ahi = a
    blo, bhi = b
    n = len(alo)
    if any(bhi[k] <= alo[k] or blo[k] >= ahi[k] for k in range(n)):
        return [a]
    out = []
    lo, hi = list(alo), list(ahi)
    for k in range(n):
        if blo[k] > lo[k]:
            piece_hi = list(hi)
            piece_hi[k] = blo[k]
            out.append((tuple(lo), tuple(piece_hi)))
            lo[k] = blo[k]
        if bhi[k] < hi[k]:
            piece_lo = list(lo)
            piece_lo[k] = bhi[k]
            out.append((tuple(piece_lo), tuple(hi)))
            hi[k] = bhi[k]
    return out


def normalize_boxes(boxes):
    """Rewrite a union of boxes so that pieces have pairwise-disjoint interiors."""
    done = []
    for box in boxes:
        pending = [box]
        for prev in done:
            pending = [piece for p in pending for piece in _box_subtract(p, prev)]
        done.extend(pending)
    return done


@dataclass(frozen=True, eq=False)
class GeneralBody:
    """A body in R^n described by an indicator.

    ``kind`` is ``"union-of-boxes"`` (``boxes`` holds ``(lo, hi)`` pairs with
    disjoint interiors) or ``"halfspaces"`` (``pieces`` holds one or more
    ``(A, b)`` H-polytopes ``A x <= b``; several pieces mean their union,
    which is what the image of a union of boxes under an affine map becomes).
    """

    dim: int
    kind: str
    boxes: tuple = ()
    pieces: tuple = ()
    bbox: tuple = ((), ())

    @classmethod
    def from_boxes(cls, boxes: Sequence) -> "GeneralBody":
        if not boxes:
            raise DegenerateBody("no boxes")
        clean = []
        n = len(boxes[0][0])
        for lo, hi in boxes:
            lo = tuple(float(x) for x in lo)
            hi = tuple(float(x) for x in hi)
            if len(lo) != n or len(hi) != n:
                raise DimensionMismatch("boxes of different dimensions")
            if any(h <= l for l, h in zip(lo, hi)):
                raise DegenerateBody(f"empty box {lo} .. {hi}")
            clean.append((lo, hi))
        clean = normalize_boxes(clean)
        lo = tuple(min(b[0][k] for b in clean) for k in range(n))
        hi = tuple(max(b[1][k] for b in clean) for k in range(n))
        return cls(n, "union-of-boxes", boxes=tuple(clean), bbox=(lo, hi))

    @classmethod
    def from_halfspaces(cls, rows: Sequence) -> "GeneralBody":
        """``rows`` is a list of ``(a, b)`` meaning ``a · x <= b``."""
        A = np.array([[float(c) for c in a] for a, _ in rows], dtype=float)
        b = np.array([float(bb) for _, bb in rows], dtype=float)
        return cls.from_pieces(A.shape[1], [(A, b)])

    @classmethod
    def from_pieces(cls, dim: int, pieces: Sequence) -> "GeneralBody":
        los, his = [], []
        frozen = []
        for A, b in pieces:
            A = np.asarray(A, dtype=float)
            b = np.asarray(b, dtype=float)
            if A.ndim != 2 or A.shape[1] != dim or b.shape != (A.shape[0],):
                raise DimensionMismatch("halfspace rows do not match the dimension")
            lo, hi = _hrep_bbox(A, b)
            los.append(lo)
            his.append(hi)
            A.setflags(write=False)
            b.setflags(write=False)
            frozen.append((A, b))
        lo = tuple(float(x) for x in np.min(los, axis=0))
        hi = tuple(float(x) for x in np.max(his, axis=0))
        return cls(dim, "halfspaces", pieces=tuple(frozen), bbox=(lo, hi))

    @classmethod
    def from_polygon(cls, P) -> "GeneralBody":
        vs = [(float(x), float(y)) for x, y in P.vertices]
        rows = []
        for i in range(len(vs)):
            (x0, y0), (x1, y1) = vs[i], vs[(i + 1) % len(vs)]
            a = (y1 - y0, -(x1 - x0))
            rows.append((a, a[0] * x0 + a[1] * y0))
        return cls.from_halfspaces(rows)

    def contains(self, X: np.ndarray) -> np.ndarray:
        """Indicator of the body at the rows of ``X`` (shape (N, dim))."""
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dim:
            raise DimensionMismatch(f"points in R^{X.shape[-1]}, body in R^{self.dim}")
        inside = np.zeros(X.shape[0], dtype=bool)
        if self.kind == "union-of-boxes":
            for lo, hi in self.boxes:
                inside |= np.all((X >= lo) & (X <= hi), axis=1)
        else:
            for A, b in self.pieces:
                inside |= np.all(X @ A.T <= b + 1e-12 * (1 + np.abs(b)), axis=1)
        return inside

    def exact_volume(self) -> float | None:
        """Exact volume for box unions, ``None`` where only sampling is available."""
        if self.kind == "union-of-boxes":
            return float(sum(math.prod(h - l for l, h in zip(lo, hi)) for lo, hi in self.boxes))
        return None

    def translated(self, t) -> "GeneralBody":
        t = tuple(float(c) for c in t)
        if len(t) != self.dim:
            raise DimensionMismatch("translation dimension")
        if self.kind == "union-of-boxes":
            return GeneralBody.from_boxes(
                [(tuple(l + c for l, c in zip(lo, t)), tuple(h + c for h, c in zip(hi, t))) for lo, hi in self.boxes]
            )
        tv = np.array(t)
        return GeneralBody.from_pieces(self.dim, [(A, b + A @ tv) for A, b in self.pieces])

    def as_pieces(self):
        """H-representation of every piece (boxes become 2n rows each)."""
        if self.kind == "halfspaces":
            return list(self.pieces)
        eye = np.eye(self.dim)
        out = []
        for lo, hi in self.boxes:
            A = np.vstack([eye, -eye])
            b = np.concatenate([np.array(hi), -np.array(lo)])
            out.append((A, b))
        return out


def _hrep_bbox(A: np.ndarray, b: np.ndarray):
    n = A.shape[1]
    lo, hi = np.empty(n), np.empty(n)
    for k in range(n):
        for sign, store in ((1.0, lo), (-1.0, hi)):
            c = np.zeros(n)
            c[k] = sign
            res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
            if res.status == 3:
                raise UnboundedBody("halfspace intersection is unbounded")
            if res.status == 2:
                raise DegenerateBody("halfspace intersection is empty")
            if res.status != 0:
                raise DegenerateBody(f"bounding box LP failed: {res.message}")
            store[k] = sign * res.fun
    if np.any(hi - lo <= 0):
        raise DegenerateBody("halfspace intersection has empty interior")
    return lo, hi


def uniform_unit(seed: int, start: int, count: int, dim: int) -> np.ndarray:
    """Points in [0, 1)^dim for sample indices ``start .. start+count-1``.

    Sample ``i`` is drawn from Philox counter blocks ``i*k .. i*k+k-1`` under
    key ``seed`` (``k = ceil(dim/4)``), so any chunking gives the same points.
    """
    k = -(-dim // 4)
    bg = Philox(key=int(seed) & ((1 << 128) - 1), counter=start * k)
    raw = bg.random_raw(count * k * 4).reshape(count, k * 4)[:, :dim]
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def joint_bbox(A: GeneralBody, B: GeneralBody):
    lo = tuple(min(a, b) for a, b in zip(A.bbox[0], B.bbox[0]))
    hi = tuple(max(a, b) for a, b in zip(A.bbox[1], B.bbox[1]))
    return lo, hi


def mc_sym_diff_volume(A: GeneralBody, B: GeneralBody, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo estimate of vol(A △ B) and its binomial standard error."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"bodies in R^{A.dim} and R^{B.dim}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    lo, hi = joint_bbox(A, B)
    lo_a, hi_a = np.array(lo), np.array(hi)
    box_vol = float(np.prod(hi_a - lo_a))
    hits = 0
    for start in range(0, samples, CHUNK):
        cnt = min(CHUNK, samples - start)
        X = lo_a + uniform_unit(seed, start, cnt, A.dim) * (hi_a - lo_a)
        hits += int(np.count_nonzero(A.contains(X) != B.contains(X)))
    p = hits / samples
    return box_vol * p, box_vol * math.sqrt(p * (1 - p) / samples)


def mc_volume(A: GeneralBody, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo volume of one body over its own bounding box."""
    lo_a, hi_a = np.array(A.bbox[0]), np.array(A.bbox[1])
    box_vol = float(np.prod(hi_a - lo_a))
    hits = 0
    for start in range(0, samples, CHUNK):
        cnt = min(CHUNK, samples - start)
        X = lo_a + uniform_unit(seed, start, cnt, A.dim) * (hi_a - lo_a)
        hits += int(np.count_nonzero(A.contains(X)))
    p = hits / samples
    return box_vol * p, box_vol * math.sqrt(p * (1 - p) / samples)
