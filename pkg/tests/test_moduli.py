import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from bodymetric import (
    BudgetExceeded,
    GeneralBody,
    SearchConfig,
    UnimodularAffine,
    apply,
    moduli_distance_2d,
    moduli_distance_nd,
    polygon_from_vertices,
    standard_corpus,
)
from bodymetric.geometry import sym_diff_area
from bodymetric.moduli import (
    axiom_report,
    best_translation,
    certified_entry_bound,
    hausdorff_orbit_probe,
    overlap_gradient,
)

from oracles import (
    gl2z_exhaustive,
    grid_min_distance,
    intersection_areas,
    linear_image,
    overlap_ceiling,
    random_lattice_polygon,
)

SQ = polygon_from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)])
SQ2 = polygon_from_vertices([(0, 0), (2, 0), (2, 2), (0, 2)])
TRI = polygon_from_vertices([(0, 0), (1, 0), (0, 1)])


def fverts(P):
    return [(float(x), float(y)) for x, y in P.vertices]


def pair_stream(seed, count, max_gap=1.0):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        P = polygon_from_vertices(random_lattice_polygon(rng))
        Q = polygon_from_vertices(random_lattice_polygon(rng))
        if abs(P.area - Q.area) <= max_gap:
            out.append((P, Q))
    return out


class TestTranslationLandscape:
    def test_best_translation_recovers_shift(self):
        Q = SQ.translated((F(3, 4), F(-5, 4)))
        t, v, gap = best_translation(SQ, Q, 0.25, 4)
        assert v == pytest.approx(0, abs=1e-9)
        assert t == pytest.approx((-0.75, 1.25), abs=1e-6)
        assert gap == pytest.approx(4 * 0.25)

    def test_far_translate(self):
        t, v, _ = best_translation(SQ, SQ.translated((5, 5)), 0.25, 4)
        assert v == pytest.approx(0, abs=1e-9) and t == pytest.approx((-5, -5), abs=1e-6)

    def test_nesting_value(self):
        _, v, _ = best_translation(SQ, SQ2, 0.25, 4)
        assert v == pytest.approx(3)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        for P, Q in pair_stream(1, 10):
            pv, qv = fverts(P), fverts(Q)
            for _ in range(5):
                t = rng.uniform(-1, 1, 2)
                h = 1e-6
                T = np.array([t + [h, 0], t - [h, 0], t + [0, h], t - [0, h]])
                a = intersection_areas(pv, qv, T)
                fd = ((a[0] - a[1]) / (2 * h), (a[2] - a[3]) / (2 * h))
                g = overlap_gradient(pv, [(x + t[0], y + t[1]) for x, y in qv])
                assert g == pytest.approx(fd, abs=1e-4)

    def test_perimeter_lipschitz(self):
        rng = np.random.default_rng(1)
        for P, Q in pair_stream(2, 10):
            pv, qv = fverts(P), fverts(Q)
            per = sum(math.dist(qv[i], qv[(i + 1) % len(qv)]) for i in range(len(qv)))
            T = rng.uniform(-3, 3, (200, 2))
            S = T + rng.uniform(-0.3, 0.3, (200, 2))
            a, b = intersection_areas(pv, qv, T), intersection_areas(pv, qv, S)
            lhs = np.abs(2 * a - 2 * b)
            assert np.all(lhs <= per * np.linalg.norm(T - S, axis=1) + 1e-9)

    def test_sqrt_overlap_tangent_bound(self):
        # sqrt of the overlap is concave on its support, so the tangent plane bounds it from above
        rng = np.random.default_rng(2)
        for P, Q in pair_stream(3, 12):
            pv, qv = fverts(P), fverts(Q)
            for _ in range(5):
                t0 = rng.uniform(-1.5, 1.5, 2)
                a0 = intersection_areas(pv, qv, t0[None])[0]
                if a0 < 1e-3:
                    continue
                g = np.array(overlap_gradient(pv, [(x + t0[0], y + t0[1]) for x, y in qv]))
                T = t0 + rng.uniform(-2, 2, (300, 2))
                a = intersection_areas(pv, qv, T)
                tangent = math.sqrt(a0) + (T - t0) @ g / (2 * math.sqrt(a0))
                on_support = a > 0
                assert np.all(np.sqrt(a[on_support]) <= tangent[on_support] + 1e-7)


class TestEntryBound:
    def test_unit_squares(self):
        # v* = 1/2, diam = sqrt 2, r = 1/2: floor(sqrt(2) / 0.25) = 5
        assert certified_entry_bound(SQ, SQ, 1.0) == 5

    def test_unit_squares_tighter_ub(self):
        # v* = 3/4: floor(sqrt(2) / 0.375) = 3
        assert certified_entry_bound(SQ, SQ, 0.5) == 3

    def test_double_squares(self):
        # v* = 7/2, diam = 2 sqrt 2, r = 1: floor(8 sqrt 2 / 3.5) = 3
        assert certified_entry_bound(SQ2, SQ2, 1.0) == 3

    def test_none_when_ub_too_large(self):
        assert certified_entry_bound(SQ, SQ, 2.0) is None

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            certified_entry_bound(SQ, SQ, 0.0)

    def test_certificate_sound_beyond_bound(self):
        # every matrix in the shell just outside the bound stays above UB - tau on a grid
        checked = 0
        for P, Q in pair_stream(4, 1):
            res = moduli_distance_2d(P, Q, SearchConfig(entry_bound_cap=20))
            M = res.stats["entry_bound"]
            pv, qv = fverts(P), fverts(Q)
            target = res.upper_bound - res.tolerance
            inner = set(gl2z_exhaustive(M))
            for A in gl2z_exhaustive(M + 1):
                if A in inner:
                    continue
                checked += 1
                v, _ = grid_min_distance(pv, linear_image(A, qv), 0.2)
                assert v >= target
        assert checked > 0

    def test_overlap_ceiling_oracle_is_sound(self):
        for P, Q in pair_stream(8, 5):
            pv, qv = fverts(P), fverts(Q)
            for A in gl2z_exhaustive(2):
                aq = linear_image(A, qv)
                v, _ = grid_min_distance(pv, aq, 0.25)
                assert v >= float(P.area + Q.area) - 2 * overlap_ceiling(pv, aq) - 1e-9


class TestModuliDistance:
    def test_square_vs_double_square(self):
        res = moduli_distance_2d(SQ, SQ2)
        assert res.certified
        assert res.upper_bound == pytest.approx(3, abs=res.tolerance)
        assert res.lower_bound >= 3 - res.tolerance

    def test_triangle_in_square(self):
        res = moduli_distance_2d(SQ, TRI)
        assert res.certified and res.upper_bound == pytest.approx(0.5, abs=res.tolerance)

    def test_self_distance_identity_witness(self):
        P = polygon_from_vertices([(0, 0), (3, 1), (1, 2)])
        res = moduli_distance_2d(P, P)
        assert res.upper_bound == 0 and res.witness.A == ((1, 0), (0, 1))
        assert res.witness.t == (0, 0)

    def test_sheared_square(self):
        sheared = apply(UnimodularAffine(((1, 1), (0, 1)), (0, 0)), SQ)
        res = moduli_distance_2d(SQ, sheared)
        assert res.certified and res.upper_bound <= res.tolerance

    def test_orbit_equivalent_pair(self):
        rng = random.Random(7)
        P = polygon_from_vertices(random_lattice_polygon(rng))
        g = UnimodularAffine(((2, 1), (1, 1)), (F(1, 2), F(-3, 4)))
        res = moduli_distance_2d(P, apply(g, P))
        assert res.certified and res.upper_bound <= res.tolerance

    def test_witness_realizes_upper_bound(self):
        for P, Q in pair_stream(5, 5):
            res = moduli_distance_2d(P, Q)
            A, t = res.witness.A, res.witness.t
            aq = linear_image(A, fverts(Q))
            ov = intersection_areas(fverts(P), aq, np.array([[float(t[0]), float(t[1])]]))[0]
            assert float(P.area + Q.area) - 2 * ov == pytest.approx(res.upper_bound, abs=1e-9)
            assert res.upper_bound <= float(sym_diff_area(P, Q)) + 1e-12

    def test_budget_exceeded_carries_result(self):
        Q = polygon_from_vertices([(0, 0), (2, 0), (0, 1)])
        with pytest.raises(BudgetExceeded) as info:
            moduli_distance_2d(SQ, Q, SearchConfig(max_cells=1, grid_step=0.5))
        res = info.value.result
        assert res is not None and res.status == "heuristic"
        assert res.lower_bound <= res.upper_bound

    def test_workers_do_not_change_result(self):
        for P, Q in pair_stream(6, 3):
            a = moduli_distance_2d(P, Q, SearchConfig(workers=1)).to_dict()
            b = moduli_distance_2d(P, Q, SearchConfig(workers=4)).to_dict()
            assert a == b

    def test_explicit_tolerance(self):
        res = moduli_distance_2d(SQ, TRI, SearchConfig(tolerance=0.01))
        assert res.tolerance == 0.01

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(grid_step=0)


class TestGeneralDimension:
    def test_sheared_cube_found(self):
        cube = GeneralBody.from_boxes([((0, 0, 0), (1, 1, 1))])
        g = UnimodularAffine(((1, 1, 0), (0, 1, 0), (0, 0, 1)), (0, 0, 0))
        cfg = SearchConfig(entry_bound_cap=1, mc_samples=4000, refine_iters=1)
        res = moduli_distance_nd(cube, apply(g, cube), cfg)
        assert res.status == "heuristic"
        assert res.upper_bound <= res.tolerance + 1e-9
        assert res.lower_bound == pytest.approx(0, abs=0.1)

    def test_identical_boxes(self):
        a = GeneralBody.from_boxes([((0, 0, 0), (1, 1, 1))])
        res = moduli_distance_nd(a, a, SearchConfig(entry_bound_cap=1, mc_samples=2000, refine_iters=1))
        assert res.upper_bound == 0

    def test_squares_as_general_bodies(self):
        a = GeneralBody.from_boxes([((0, 0), (1, 1))])
        b = GeneralBody.from_boxes([((0, 0), (2, 2))])
        res = moduli_distance_nd(a, b, SearchConfig(entry_bound_cap=1, mc_samples=20000, refine_iters=2))
        assert res.upper_bound == pytest.approx(3, abs=res.tolerance + 0.05)

    def test_volume_gap_lower_bound(self):
        a = GeneralBody.from_boxes([((0, 0, 0), (1, 1, 1))])
        b = GeneralBody.from_boxes([((0, 0, 0), (2, 1, 1))])
        res = moduli_distance_nd(a, b, SearchConfig(entry_bound_cap=1, mc_samples=4000, refine_iters=1))
        assert res.lower_bound == pytest.approx(1.0)
        assert res.upper_bound >= 1.0 - res.tolerance


class TestProbeAndAxioms:
    def test_probe_sym_diff_invariant(self):
        rows = hausdorff_orbit_probe(SQ, TRI, ((2, 1), (1, 1)), 4)
        assert [r.m for r in rows] == [0, 1, 2, 3, 4]
        assert all(r.sym_diff == F(1, 2) for r in rows)

    def test_probe_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            hausdorff_orbit_probe(SQ, TRI, ((2, 0), (0, 1)), 2)

    def test_axiom_report_on_corpus(self):
        c = standard_corpus()
        rep = axiom_report([(k, c[k]) for k in ("unit-square", "simplex", "square-2", "hirzebruch-1")])
        assert rep.ok, rep
        assert rep.triples_checked == 24
        assert not rep.heuristic_pairs
