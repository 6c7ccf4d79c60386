"""The integral affine group AGL(n, Z) and its action on bodies."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .bodies import GeneralBody
from .errors import DimensionMismatch, NotUnimodular
from .geometry import ConvexPolygon, _polygon_from_chain
from .numbers import all_exact, number_str, parse_number

INT64_MAX = (1 << 63) - 1

Matrix = tuple  # tuple of tuples of int


def _check_int64(M):
    for row in M:
        for x in row:
            if not -INT64_MAX <= x <= INT64_MAX:
                raise OverflowError(f"matrix entry {x} exceeds the int64 range")


def int_det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    n = len(M)
    a = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_mul(A, B) -> Matrix:
    n, m = len(A), len(B[0])
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(m)) for i in range(n))


def mat_vec(A, v) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def int_inverse(A) -> Matrix:
    """Inverse of a unimodular integer matrix (Gauss-Jordan over Q)."""
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    inv = tuple(tuple(aug[i][n + j] for j in range(n)) for i in range(n))
    if any(x.denominator != 1 for row in inv for x in row):
        raise NotUnimodular("inverse is not integral")
    return tuple(tuple(int(x) for x in row) for row in inv)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _coerce_vector(t) -> tuple:
    vals = [parse_number(x) if isinstance(x, str) else x for x in t]
    if all_exact(vals):
        return tuple(Fraction(x) for x in vals)
    return tuple(float(x) for x in vals)


@dataclass(frozen=True)
class UnimodularAffine:
    """g = (A, t) acting by x -> A x + t with A in GL(n, Z)."""

    A: Matrix
    t: tuple

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        n = len(A)
        if n == 0 or any(len(row) != n for row in A):
            raise DimensionMismatch("A must be a non-empty square matrix")
        if any(int(x) != x for row in self.A for x in row):
            raise NotUnimodular("A must have integer entries")
        _check_int64(A)
        if len(self.t) != n:
            raise DimensionMismatch(f"translation has {len(self.t)} entries, A is {n}x{n}")
        d = int_det(A)
        if d not in (1, -1):
            raise NotUnimodular(f"det A = {d}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "t", _coerce_vector(self.t))

    @property
    def dim(self) -> int:
        return len(self.A)

    @property
    def det(self) -> int:
        return int_det(self.A)

    @classmethod
    def identity(cls, n: int) -> "UnimodularAffine":
        return cls(identity_matrix(n), (0,) * n)

    @classmethod
    def linear(cls, A) -> "UnimodularAffine":
        return cls(A, (0,) * len(A))

    @classmethod
    def translation(cls, t) -> "UnimodularAffine":
        return cls(identity_matrix(len(t)), tuple(t))

    def to_dict(self) -> dict:
        return {"A": [list(r) for r in self.A], "t": [number_str(x) for x in self.t]}

    @classmethod
    def from_dict(cls, d: dict) -> "UnimodularAffine":
        return cls(tuple(tuple(r) for r in d["A"]), tuple(parse_number(x) for x in d["t"]))


def compose(g1: UnimodularAffine, g2: UnimodularAffine) -> UnimodularAffine:
    """g1 ∘ g2 = (A1 A2, A1 t2 + t1)."""
    if g1.dim != g2.dim:
        raise DimensionMismatch(f"dimensions {g1.dim} and {g2.dim}")
    A = mat_mul(g1.A, g2.A)
    _check_int64(A)
    t = tuple(a + b for a, b in zip(mat_vec(g1.A, g2.t), g1.t))
    return UnimodularAffine(A, t)


def inverse(g: UnimodularAffine) -> UnimodularAffine:
    Ainv = int_inverse(g.A)
    return UnimodularAffine(Ainv, tuple(-x for x in mat_vec(Ainv, g.t)))


def apply(g: UnimodularAffine, body):
    """Image of a polygon or general body under g."""
    if body.dim != g.dim:
        raise DimensionMismatch(f"element acts on R^{g.dim}, body lives in R^{body.dim}")
    if isinstance(body, ConvexPolygon):
        return _apply_polygon(g, body)
    if isinstance(body, GeneralBody):
        return _apply_general(g, body)
    raise TypeError(f"cannot act on {type(body).__name__}")


def _apply_polygon(g: UnimodularAffine, P: ConvexPolygon) -> ConvexPolygon:
    (a, b), (c, d) = g.A
    exact = P.exact and all_exact(g.t)
    if exact:
        tx, ty = g.t
        vs = [P.vertices[i] for i in range(len(P))]
    else:
        tx, ty = (float(x) for x in g.t)
        vs = [(float(x), float(y)) for x, y in P.vertices]
    pts = [(a * x + b * y + tx, c * x + d * y + ty) for x, y in vs]
    if g.det < 0:
        pts.reverse()
    out = _polygon_from_chain(pts, exact)
    if not out:
        raise AssertionError("affine image of a polygon lost its area")
    return out


def _apply_general(g: UnimodularAffine, B: GeneralBody) -> GeneralBody:
    t = np.array([float(x) for x in g.t])
    if g.A == identity_matrix(g.dim):
        return B.translated(t)
    Ainv = np.array(int_inverse(g.A), dtype=float)
    pieces = []
    for C, b in B.as_pieces():
        CA = C @ Ainv
        pieces.append((CA, b + CA @ t))
    return GeneralBody.from_pieces(B.dim, pieces)


# ---------------------------------------------------------------------------
# enumeration


def _ext_gcd(a: int, b: int):
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    sa, sb = (1 if a >= 0 else -1), (1 if b >= 0 else -1)
    r0, r1 = abs(a), abs(b)
    x0, y0, x1, y1 = 1, 0, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return r0, sa * x0, sb * y0


def _k_range(c0: int, step: int, M: int):
    """Integers k with |c0 + k*step| <= M (all k if step == 0 and |c0| <= M)."""
    if step == 0:
        return (None, None) if abs(c0) <= M else (1, 0)
    lo, hi = -M - c0, M - c0
    if step < 0:
        lo, hi, step = -hi, -lo, -step
    return -((-lo) // step), hi // step


def _gl2z_bounded(M: int) -> Iterator[Matrix]:
    """det ±1 matrices with entries in [-M, M], lexicographic in (a, b, c, d).

    For each coprime first row (a, b) the second rows with a*d - b*c = ±1 form
    two arithmetic progressions (c0, d0) + k (a, b).
    """
    for a in range(-M, M + 1):
        for b in range(-M, M + 1):
            g, x, y = _ext_gcd(a, b)
            if g != 1:
                continue
            rows = set()
            for s in (1, -1):
                c0, d0 = -s * y, s * x
                klo1, khi1 = _k_range(c0, a, M)
                klo2, khi2 = _k_range(d0, b, M)
                los = [k for k in (klo1, klo2) if k is not None]
                his = [k for k in (khi1, khi2) if k is not None]
                klo, khi = max(los), min(his)
                for k in range(klo, khi + 1):
                    rows.add((c0 + k * a, d0 + k * b))
            for c, d in sorted(rows):
                yield ((a, b), (c, d))


def _elementary_generators(n: int) -> list[Matrix]:
    I = identity_matrix(n)
    gens = []
    for i, j in itertools.permutations(range(n), 2):
        for s in (1, -1):
            E = [list(r) for r in I]
            E[i][j] = s
            gens.append(tuple(tuple(r) for r in E))
    for perm in itertools.permutations(range(n)):
        if list(perm) == list(range(n)):
            continue
        gens.append(tuple(tuple(int(perm[i] == j) for j in range(n)) for i in range(n)))
    for signs in itertools.product((1, -1), repeat=n):
        if all(s == 1 for s in signs):
            continue
        gens.append(tuple(tuple(signs[i] if i == j else 0 for j in range(n)) for i in range(n)))
    return gens


@dataclass(frozen=True)
class GroupEnumeration:
    """A deterministic, duplicate-free stream of GL(n, Z) matrices.

    ``strategy`` is ``"entry-bound"`` (``param`` = M, n = 2 only) or
    ``"generator-words"`` (``param`` = maximal word length).
    """

    dim: int
    strategy: str
    param: int

    def __iter__(self) -> Iterator[Matrix]:
        if self.strategy == "entry-bound":
            return _gl2z_bounded(self.param)
        if self.strategy == "generator-words":
            return self._words()
        raise ValueError(f"unknown strategy {self.strategy!r}")

    def _words(self):
        gens = _elementary_generators(self.dim)
        level = [identity_matrix(self.dim)]
        seen = set(level)
        yield level[0]
        for _ in range(self.param):
            nxt = []
            for M in level:
                for G in gens:
                    P = mat_mul(M, G)
                    if P not in seen:
                        seen.add(P)
                        nxt.append(P)
                        yield P
            level = nxt

    def to_list(self) -> list[Matrix]:
        return list(self)


def enumerate_gl2z(M: int) -> GroupEnumeration:
    if M < 0:
        raise ValueError("entry bound must be >= 0")
    return GroupEnumeration(2, "entry-bound", M)


def enumerate_glnz_words(n: int, depth: int) -> GroupEnumeration:
    if n < 2 or depth < 0:
        raise ValueError("need n >= 2 and depth >= 0")
    return GroupEnumeration(n, "generator-words", depth)
