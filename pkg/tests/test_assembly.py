import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings

from strategies import params as param_strategy

from krinkle.assembly import (
    CoverageWarning,
    advance_front,
    build_tiling,
    build_wedge,
    rows_for_radius,
    tiles_in_window,
    wedge_start_position,
)
from krinkle.geometry import LatticePoint, RealPoint, RigidMotion, apply_motion, project
from krinkle.prototile import build_prototile
from krinkle.sequences import DirectionSequence, Params, shifted_period

FIXTURES = [(3, 7, 14), (3, 7, 22), (2, 5, 10), (1, 4, 14), (3, 8, 24), (2, 9, 32), (7, 17, 34), (5, 16, 54)]


def placed_edge(tile, edge):
    return apply_motion(tile.motion, edge.start), apply_motion(tile.motion, edge.end)


class TestWedge:
    def test_tile_counts(self):
        p = Params.from_triple(3, 7, 14)
        assert len(build_wedge(p, 0, 1).tiles) == 1
        assert len(build_wedge(p, 0, 3).tiles) == 6

    def test_tile_positions(self):
        p = Params.from_triple(3, 7, 14)
        w = build_wedge(p, 0, 3)
        d0 = LatticePoint.from_steps([0, 3, 6, 2, 5, 1, 4], 14)
        d1 = LatticePoint.basis(7, 14) - LatticePoint.basis(0, 14)
        assert w.tile(2, 1).motion.translation == d0 * 2 + d1
        assert all(t.motion.rotation_index == 0 for t in w.tiles)

    def test_first_three_tiles_meet_at_origin_tile_end(self):
        p = Params.from_triple(3, 7, 14)
        proto = build_prototile(p)
        w = build_wedge(p, 0, 2)
        t00, t10, t11 = w.tile(0, 0), w.tile(1, 0), w.tile(1, 1)
        # the next row shares the origin tile's opposite edges: T[1,1] on the base side, T[1,0] on the neighbour side
        assert placed_edge(t11, proto.base) == placed_edge(t00, proto.opposite_base)
        assert placed_edge(t10, proto.neighbor) == placed_edge(t00, proto.opposite_neighbor)
        end = apply_motion(t00.motion, proto.end)
        assert apply_motion(t10.motion, proto.neighbor.end) == end
        assert apply_motion(t11.motion, proto.base.end) == end

    @settings(max_examples=25, deadline=None)
    @given(param_strategy(max_k=9))
    def test_interior_edge_sharing(self, p):
        proto = build_prototile(p)
        i = p.w - 1
        w = build_wedge(p, i, 4)
        for r in range(3):
            for c in range(r + 1):
                t = w.tile(r, c)
                assert placed_edge(w.tile(r + 1, c + 1), proto.base) == placed_edge(t, proto.opposite_base)
                assert placed_edge(w.tile(r + 1, c), proto.neighbor) == placed_edge(t, proto.opposite_neighbor)

    def test_rejects_bad_index(self):
        p = Params.from_triple(3, 7, 14)
        with pytest.raises(ValueError):
            build_wedge(p, 14, 1)
        with pytest.raises(ValueError):
            build_wedge(p, 0, 0)


class TestFront:
    def test_start_positions(self):
        p = Params.from_triple(3, 7, 14)
        f0 = shifted_period(3, 7, 1)
        start = wedge_start_position(p, 1, f0)
        assert start == LatticePoint.from_steps([7, 3, 6, 2, 5], 14)
        assert wedge_start_position(p, 0, None) == LatticePoint.zero(14)

        q = Params.from_triple(2, 5, 10)
        f1 = shifted_period(2, 5, 2)
        assert f1.take(5) == [5, 2, 4, 6, 3]
        assert wedge_start_position(q, 2, f1) == LatticePoint.basis(5, 10)

    def test_start_position_rejects_front_without_direction(self):
        p = Params.from_triple(3, 7, 14)
        from krinkle.prototile import ConstructionError

        with pytest.raises(ConstructionError):
            wedge_start_position(p, 1, DirectionSequence.periodic([0, 3, 6, 2, 5, 8, 4]))

    def test_advance_front(self):
        f = DirectionSequence.periodic([7, 3, 6, 2, 5, 1, 4])
        assert advance_front(f, 1, 7).take(7) == [7, 3, 6, 2, 5, 8, 4]
        s0 = shifted_period(3, 7, 0)
        assert advance_front(s0, 0, 7) == shifted_period(3, 7, 1)
        assert 1 not in advance_front(f, 1, 7).take(7)
        with pytest.raises(ValueError, match="C\\(2\\)"):
            advance_front(f, 2, 7, m=3)

    @pytest.mark.parametrize("triple", FIXTURES)
    def test_fronts_follow_replacement_rule(self, triple):
        p = Params.from_triple(*triple)
        tiling = build_tiling(p, 1)
        front = shifted_period(p.m, p.k, 0)
        for i, f in enumerate(tiling.fronts):
            front = advance_front(front, i, p.k, p.m)
            assert f == front
            assert f.take(10 * p.k) == shifted_period(p.m, p.k, i + 1).take(10 * p.k)

    @settings(max_examples=40, deadline=None)
    @given(param_strategy())
    def test_closure_identities(self, p):
        tiling = build_tiling(p, 1)
        last, base = tiling.fronts[-1], tiling.base
        H = 10 * p.k
        if p.offset:
            assert last[0] == p.t * p.k == p.n // 2 + p.m
            assert last.take(H) == [b + p.n // 2 for b in base.take(H + 1)[1:]]
        else:
            assert last.take(H) == [b + p.k for b in base.take(H)]


class TestTiling:
    @pytest.mark.parametrize("triple, w, copies", [((3, 7, 14), 7, 2), ((3, 7, 22), 11, 2), ((2, 5, 10), 5, 2)])
    def test_wedge_and_closure_counts(self, triple, w, copies):
        tiling = build_tiling(Params.from_triple(*triple), 1)
        assert len(tiling.wedges) == w
        assert len(tiling.closure_motions) == copies

    def test_no_offset_closure_rotations(self):
        tiling = build_tiling(Params.from_triple(3, 8, 24), 1)
        assert [m.rotation_index for m in tiling.closure_motions] == [0, 8, 16]

    def test_offset_closure_is_half_turn_about_base_midpoint(self):
        p = Params.from_triple(3, 7, 22)
        tiling = build_tiling(p, 1)
        ident, half = tiling.closure_motions
        assert ident.rotation_index == 0 and ident.translation.is_zero()
        assert half.half_turn_about == RealPoint(0.5, 0.0)
        proto = tiling.prototile
        centre = project(proto.base.end)
        assert half.half_turn_about == pytest.approx((centre.x / 2, centre.y / 2))
        lattice = tiling.closure_lattice[1]
        for v in proto.boundary:
            a = apply_motion(half, v)
            b = project(apply_motion(lattice, v))
            assert math.hypot(a.x - b.x, a.y - b.y) < 1e-9

    @pytest.mark.parametrize("triple", FIXTURES)
    def test_every_wedge_rotation_appears_once(self, triple):
        p = Params.from_triple(*triple)
        tiles = list(build_tiling(p, 1).iter_tiles())
        assert sorted(t.wedge_index for t in tiles) == list(range(p.n))
        assert all(t.motion.rotation_index == t.wedge_index for t in tiles)

    def test_rows_one_window_counts(self):
        # one origin tile per wedge, w wedges times the closure copies
        assert len(tiles_in_window(build_tiling(Params.from_triple(3, 7, 14), 1), None)) == 14
        assert len(tiles_in_window(build_tiling(Params.from_triple(3, 7, 22), 1), None)) == 22

    def test_areas_equal(self):
        p = Params.from_triple(3, 7, 14)
        from krinkle.geometry import shoelace_area

        areas = [shoelace_area(t.vertices) for t in build_tiling(p, 3).iter_tiles()]
        assert np.allclose(areas, build_prototile(p).area(), atol=1e-9, rtol=0)

    def test_tiny_radius_keeps_tiles_at_origin(self):
        p = Params.from_triple(3, 7, 14)
        tiling = build_tiling(p, 2)
        near = tiles_in_window(tiling, 1e-9)
        touching = [t for t in tiling.iter_tiles() if np.hypot(*t.vertices.T).min() < 1e-9]
        assert touching and {t.key() for t in touching} <= {t.key() for t in near}

    def test_window_order_is_deterministic(self):
        p = Params.from_triple(3, 7, 22)
        a = [t.key() for t in tiles_in_window(build_tiling(p, 4), 8)]
        b = [t.key() for t in tiles_in_window(build_tiling(p, 4), 8)]
        assert a == b == sorted(a)

    def test_warns_when_budget_too_small(self):
        tiling = build_tiling(Params.from_triple(3, 7, 14), 1)
        with pytest.warns(CoverageWarning):
            tiles_in_window(tiling, 20)

    @pytest.mark.parametrize("triple", FIXTURES)
    def test_rows_for_radius_is_enough(self, triple):
        p = Params.from_triple(*triple)
        for radius in (3.0, 6.0, 15.0):
            rows = rows_for_radius(p, radius)
            tiling = build_tiling(p, rows)
            assert tiling.covered_radius() > radius
            with warnings.catch_warnings():
                warnings.simplefilter("error", CoverageWarning)
                tiles_in_window(tiling, radius)
            if rows > 1:
                assert build_tiling(p, rows - 1).covered_radius() <= radius

    def test_motions_compose_exactly(self):
        p = Params.from_triple(2, 5, 10)
        tiling = build_tiling(p, 2)
        proto = tiling.prototile
        for t in tiling.iter_tiles():
            lattice = t.lattice_vertices(proto)
            assert np.allclose([tuple(project(v)) for v in lattice], t.vertices, atol=1e-9)
            assert isinstance(t.motion, RigidMotion) and t.motion.is_lattice


@pytest.mark.parametrize("triple", [(3, 7, 14), (2, 5, 10), (3, 8, 24), (7, 17, 34)])
def test_centre_is_met_by_t_corners(triple):
    # without offset, t tiles meet at the origin, each with a corner of 2*pi/t
    p = Params.from_triple(*triple)
    at_origin = []
    for t in build_tiling(p, 2).iter_tiles():
        V = t.vertices
        hits = np.flatnonzero(np.hypot(*V.T) < 1e-9)
        for j in hits:
            a, b = V[j - 1] - V[j], V[(j + 1) % len(V)] - V[j]
            ang = (math.atan2(a[1], a[0]) - math.atan2(b[1], b[0])) % (2 * math.pi)
            at_origin.append(ang)
    assert len(at_origin) == p.t
    assert np.allclose(at_origin, 2 * math.pi / p.t, atol=1e-9)
