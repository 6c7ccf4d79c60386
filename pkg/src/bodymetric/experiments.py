"""Reproductions, fuzzers and batch distance matrices."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bodies import GeneralBody, mc_sym_diff_volume
from .delzant import standard_corpus
from .errors import BudgetExceeded, InputError
from .geometry import ConvexPolygon, Hyperplane, cube_vertex_gap, hausdorff_distance, polygon_from_vertices, sym_diff_area
from .io import load_body
from .moduli import SearchConfig, hausdorff_orbit_probe, moduli_distance_2d, moduli_distance_nd
from .numbers import exact_str, fmt_sig, is_exact

EX512_MATRIX = ((1, 2), (2, 5))


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int
    version: str = __version__
    inputs: dict = field(default_factory=dict)  # path -> sha256
    wall_time: float | None = None

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("wall_time")
        return d


def _num_out(x) -> dict:
    out = {"value": fmt_sig(x)}
    s = exact_str(x)
    if s is not None:
        out["exact"] = s
    return out


# ---------------------------------------------------------------------------
# thin rectangles: Cauchy but no limit among bodies


def ex58_rectangle(m: int) -> ConvexPolygon:
    return polygon_from_vertices([(0, 0), (1, 0), (1, Fraction(1, m)), (0, Fraction(1, m))])


@dataclass
class Ex58Result:
    rows: list  # (m, area, d(P_m, P_{m+1}), tail sup_{k>m} d(P_m, P_k))
    pair_table_ok: bool
    tail_ok: bool
    floors: list  # (m, corpus name, floor, sym_diff to P_m)
    floors_ok: bool

    @property
    def ok(self) -> bool:
        return self.pair_table_ok and self.tail_ok and self.floors_ok

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"m": m, "area": _num_out(a), "d_next": _num_out(d), "tail": _num_out(t)} for m, a, d, t in self.rows
            ],
            "pair_table_ok": self.pair_table_ok,
            "tail_ok": self.tail_ok,
            "floors": [{"m": m, "Q": name, "floor": _num_out(f), "d": _num_out(d)} for m, name, f, d in self.floors],
            "floors_ok": self.floors_ok,
            "ok": self.ok,
        }


def demo_ex58(m_max: int) -> Ex58Result:
    """Rectangles [0,1] x [0,1/m]: exact distance table and volume floors."""
    if m_max < 2:
        raise ValueError("m_max must be >= 2")
    rects = {m: ex58_rectangle(m) for m in range(1, m_max + 1)}
    table = {(m, k): sym_diff_area(rects[m], rects[k]) for m in rects for k in rects}
    pair_ok = all(v == abs(Fraction(1, m) - Fraction(1, k)) for (m, k), v in table.items())
    rows, tail_ok = [], True
    for m in range(1, m_max + 1):
        d_next = table[(m, m + 1)] if m < m_max else Fraction(0)
        tail = max((table[(m, k)] for k in range(m + 1, m_max + 1)), default=Fraction(0))
        tail_ok &= tail == Fraction(1, m) - Fraction(1, m_max) and tail <= Fraction(1, m)
        rows.append((m, rects[m].area, d_next, tail))
    floors, floors_ok = [], True
    corpus = standard_corpus()
    for m in range(1, m_max + 1):
        for name, Q in corpus.items():
            floor = Q.area - Fraction(1, m)
            d = sym_diff_area(rects[m], Q)
            floors_ok &= abs(floor) <= d
            floors.append((m, name, floor, d))
    return Ex58Result(rows, pair_ok, tail_ok, floors, floors_ok)


# ---------------------------------------------------------------------------
# rectangle vs pentagon along the orbit of a hyperbolic matrix


def _rational_vec(v, den=10**6):
    return tuple(Fraction(float(c)).limit_denominator(den) for c in v)


def ex512_polygons():
    """Rectangle along the eigenvectors of [[1,2],[2,5]] and a pentagon with
    one extra vertex pushed out of its long edge by 0.1 * min_width."""
    w, V = np.linalg.eigh(np.array(EX512_MATRIX, dtype=float))
    small, large = V[:, 0] / V[0, 0], V[:, 1] / V[0, 1]  # first coordinate 1
    us, ul = _rational_vec(small), _rational_vec(large)
    zero = (Fraction(0), Fraction(0))
    P1 = polygon_from_vertices([zero, ul, (ul[0] + us[0], ul[1] + us[1]), us])
    delta = 0.1 * P1.min_width
    unit = small / np.linalg.norm(small)
    push = _rational_vec(delta * unit)
    mid = (ul[0] / 2, ul[1] / 2)
    apex = (mid[0] - push[0], mid[1] - push[1])
    P2 = polygon_from_vertices(list(P1.vertices) + [apex])
    return P1, P2, tuple(float(x) for x in w)


@dataclass
class Ex512Result:
    rows: list
    eigenvalues: tuple
    ratios: list  # (m, d_H(m+1) / d_H(m))
    fitted_ratio: float
    expected_ratio: float
    sym_diff_drift: float
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [fmt_sig(x) for x in self.eigenvalues],
            "rows": [{"m": r.m, "hausdorff": fmt_sig(r.hausdorff), "sym_diff": _num_out(r.sym_diff)} for r in self.rows],
            "ratios": [{"m": m, "ratio": fmt_sig(r)} for m, r in self.ratios],
            "fitted_ratio": fmt_sig(self.fitted_ratio),
            "expected_ratio": fmt_sig(self.expected_ratio),
            "sym_diff_drift": fmt_sig(self.sym_diff_drift),
            "checks": self.checks,
            "ok": self.ok,
        }


def demo_ex512(m_max: int) -> Ex512Result:
    if m_max < 3:
        raise ValueError("m_max must be >= 3")
    P1, P2, eig = ex512_polygons()
    rows = hausdorff_orbit_probe(P1, P2, EX512_MATRIX, m_max)
    ratios = [(r.m, rows[i + 1].hausdorff / r.hausdorff) for i, r in enumerate(rows[:-1])]
    tail = [r for r in rows if r.m >= 3]
    slope = np.polyfit([r.m for r in tail], [math.log(r.hausdorff) for r in tail], 1)[0] if len(tail) >= 2 else math.nan
    fitted = math.exp(slope)
    expected = 3 - 2 * math.sqrt(2)
    sd = [float(r.sym_diff) for r in rows]
    drift = max(sd) - min(sd)
    window = [r for m, r in ratios if m >= 3]
    checks = {
        "sym_diff_constant": drift <= 1e-9,
        "ratio_window": all(0.8 * expected <= r <= 1.2 * expected for r in window)
        and 0.8 * expected <= fitted <= 1.2 * expected,
        "hausdorff_initial_positive": rows[0].hausdorff > 0,
    }
    return Ex512Result(rows, eig, ratios, fitted, expected, drift, checks)


# ---------------------------------------------------------------------------
# hyperplane fuzzing


@dataclass
class FuzzResult:
    trials: int
    dim: int
    a: float
    failures: int
    worst_margin: float
    worst_hyperplane: tuple

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.worst_margin > 0

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "dim": self.dim,
            "a": self.a,
            "failures": self.failures,
            "worst_margin": fmt_sig(self.worst_margin),
            "worst_hyperplane": {"normal": [fmt_sig(c) for c in self.worst_hyperplane[0]], "offset": fmt_sig(self.worst_hyperplane[1])},
            "passed": self.passed,
        }


def fuzz_lemma43(trials: int, a: float, n: int, seed: int) -> FuzzResult:
    """Random hyperplanes against the cube [-2a, 2a]^n: some vertex is farther than a."""
    if trials < 1 or a <= 0:
        raise ValueError("need trials >= 1 and a > 0")
    rng = np.random.default_rng(seed)
    normals = rng.standard_normal((trials, n))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    offsets = rng.uniform(-5 * a, 5 * a, trials)
    failures, worst, worst_h = 0, math.inf, None
    for nu, b in zip(normals, offsets):
        H = Hyperplane(tuple(float(c) for c in nu), float(b))
        gap, _ = cube_vertex_gap(a, n, H)
        margin = gap - a
        if margin <= 0:
            failures += 1
        if margin < worst:
            worst, worst_h = margin, (H.normal, H.offset)
    return FuzzResult(trials, n, a, failures, worst, worst_h)


# ---------------------------------------------------------------------------
# distance matrices

MATRIX_COLUMNS = ("name_i", "name_j", "value", "lower_bound", "status", "exact")


@dataclass
class MatrixResult:
    names: list
    rows: list  # dicts keyed by MATRIX_COLUMNS plus "tolerance"
    errors: dict  # file name -> message
    manifest: RunManifest

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# manifest: " + json.dumps(self.manifest.to_dict(), sort_keys=True) + "\n")
        for name, msg in sorted(self.errors.items()):
            buf.write(f"# error: {name}: {msg}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(MATRIX_COLUMNS)
        for r in self.rows:
            w.writerow([_cell(r[c]) for c in MATRIX_COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "manifest": self.manifest.to_dict(),
            "errors": self.errors,
            "rows": [{c: r[c] for c in MATRIX_COLUMNS} for r in self.rows],
        }
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"

    def value(self, i: str, j: str) -> float:
        for r in self.rows:
            if r["name_i"] == i and r["name_j"] == j:
                return r["value"]
        raise KeyError((i, j))


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".12g")
    return x


def _pair_entry(A, B, mode: str, cfg: SearchConfig) -> dict:
    both_polys = isinstance(A, ConvexPolygon) and isinstance(B, ConvexPolygon)
    if mode == "d":
        if both_polys:
            v = sym_diff_area(A, B)
            return {"value": fmt_sig(v), "lower_bound": fmt_sig(v), "status": "exact", "exact": exact_str(v), "tolerance": 0.0}
        gA = A if isinstance(A, GeneralBody) else GeneralBody.from_polygon(A)
        gB = B if isinstance(B, GeneralBody) else GeneralBody.from_polygon(B)
        est, se = mc_sym_diff_volume(gA, gB, cfg.mc_samples, cfg.seed)
        return {"value": fmt_sig(est), "lower_bound": None, "status": "estimate", "exact": None, "tolerance": 4 * se}
    if mode == "hausdorff":
        if not both_polys:
            return {"value": None, "lower_bound": None, "status": "unsupported", "exact": None, "tolerance": 0.0}
        v = hausdorff_distance(A, B)
        return {"value": fmt_sig(v), "lower_bound": fmt_sig(v), "status": "exact", "exact": None, "tolerance": 0.0}
    if mode == "orbit":
        if both_polys:
            try:
                res = moduli_distance_2d(A, B, cfg)
            except BudgetExceeded as exc:
                res = exc.result
        else:
            gA = A if isinstance(A, GeneralBody) else GeneralBody.from_polygon(A)
            gB = B if isinstance(B, GeneralBody) else GeneralBody.from_polygon(B)
            try:
                res = moduli_distance_nd(gA, gB, cfg)
            except BudgetExceeded as exc:
                res = exc.result
        return {
            "value": fmt_sig(res.upper_bound),
            "lower_bound": fmt_sig(res.lower_bound),
            "status": res.status,
            "exact": None,
            "tolerance": res.tolerance,
        }
    raise ValueError(f"unknown mode {mode!r}")


def distance_matrix(corpus_dir, mode: str, cfg: SearchConfig | None = None, workers: int = 1) -> MatrixResult:
    """All ordered pairs of the bodies in ``corpus_dir/*.json``.

    Each unordered pair is computed once and mirrored, so the matrix is
    exactly symmetric.  Unreadable files are reported and skipped.
    """
    cfg = cfg or SearchConfig()
    if mode not in ("d", "orbit", "hausdorff"):
        raise ValueError(f"unknown mode {mode!r}")
    paths = sorted(Path(corpus_dir).glob("*.json"))
    bodies, digests, errors = {}, {}, {}
    for p in paths:
        try:
            body, digest = load_body(p)
        except InputError as exc:
            errors[p.name] = str(exc)
            continue
        bodies[p.stem] = body
        digests[p.name] = digest
    names = list(bodies)
    if len(names) < 2:
        raise InputError(f"need at least 2 readable bodies in {corpus_dir}, found {len(names)}")
    dims = {b.dim for b in bodies.values()}
    if len(dims) != 1:
        raise InputError(f"bodies of mixed dimension {sorted(dims)}")

    pairs = [(i, j) for i in range(len(names)) for j in range(i, len(names))]
    pair_cfg = SearchConfig(**{**asdict(cfg), "workers": 1})

    def work(ij):
        i, j = ij
        return _pair_entry(bodies[names[i]], bodies[names[j]], mode, pair_cfg)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, pairs))
    else:
        results = [work(ij) for ij in pairs]
    table = dict(zip(pairs, results))
    rows = []
    for i, ni in enumerate(names):
        for j, nj in enumerate(names):
            entry = table[(min(i, j), max(i, j))]
            rows.append({"name_i": ni, "name_j": nj, **entry})

    config = {k: v for k, v in asdict(cfg).items() if k != "workers"}
    manifest = RunManifest(f"matrix --mode {mode}", {"mode": mode, **config}, cfg.seed, inputs=digests)
    return MatrixResult(names, rows, errors, manifest)


def triangle_audit(result: MatrixResult) -> list:
    """Triples (a, b, c) where value(a,b) > value(a,c) + value(c,b) + slack.

    Only rows with status ``exact`` or ``certified`` take part; the slack is
    the sum of the three rows' tolerances plus 1e-9.
    """
    good = {(r["name_i"], r["name_j"]): r for r in result.rows if r["status"] in ("exact", "certified")}
    names = result.names
    bad = []
    for a in names:
        for b in names:
            for c in names:
                keys = [(a, b), (a, c), (c, b)]
                if not all(k in good for k in keys):
                    continue
                vals = [good[k]["value"] for k in keys]
                slack = sum(good[k]["tolerance"] for k in keys) + 1e-9
                if vals[0] > vals[1] + vals[2] + slack:
                    bad.append((a, b, c, vals[0] - vals[1] - vals[2]))
    return bad
