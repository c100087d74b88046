"""Family constructors and the star's closed-form characteristic function."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qglab import (
    GraphError,
    VertexCondition,
    betti,
    diameter,
    dirichlet_eccentricity,
    same_shape,
    total_length,
)
from qglab import families as fam
from qglab import surgery as srg


class TestStar:
    def test_reference_lengths(self):
        p = fam.StarParams(1.0, 0.5, 3)
        assert p.ell0 == pytest.approx(0.25)
        assert p.ell1 == pytest.approx(0.25)

    def test_reference_lengths_wide(self):
        p = fam.StarParams(2.0, 1.0, 4)
        assert p.ell0 == pytest.approx(2.0 / 3.0)
        assert p.ell1 == pytest.approx(1.0 / 3.0)

    def test_geometry(self):
        g = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        assert total_length(g) == pytest.approx(1.0, abs=1e-12)
        assert diameter(g) == pytest.approx(0.5, abs=1e-12)
        assert dirichlet_eccentricity(g) == pytest.approx(0.5, abs=1e-12)
        assert g.vertex("v0").condition is VertexCondition.DIRICHLET

    def test_degenerate_distinguished_edge_rejected(self):
        with pytest.raises(GraphError):
            fam.StarParams(1.0, 1.0 / 3.0, 3)  # n D = L

    def test_zero_pendants_rejected(self):
        with pytest.raises(GraphError):
            fam.make_star(fam.StarParams(1.0, 1.0, 2))  # ell1 = 0

    def test_d_above_l_rejected(self):
        with pytest.raises(GraphError):
            fam.StarParams(1.0, 1.5, 3)

    @settings(max_examples=60, deadline=None)
    @given(
        L=st.floats(0.2, 5.0),
        frac=st.floats(0.1, 0.9),
        n=st.integers(2, 12),
    )
    def test_length_and_diameter_for_valid_params(self, L, frac, n):
        D = L * frac
        try:
            p = fam.StarParams(L, D, n)
        except GraphError:
            return
        if p.ell1 <= 1e-9 or not fam.shorter_edges_ok(p):
            return
        g = fam.make_star(p)
        assert total_length(g) == pytest.approx(L, abs=1e-12 * max(1, L))
        assert diameter(g) == pytest.approx(D, abs=1e-12 * max(1, L))

    def test_shorter_edges_flag(self):
        assert fam.shorter_edges_ok(fam.StarParams(1.0, 0.5, 3))
        # pendants longer than the distinguished edge: diameter exceeds D
        p = fam.StarParams(1.0, 0.6, 2)
        assert not fam.shorter_edges_ok(p)
        assert diameter(fam.make_star(p)) > 0.6


class TestDumbbells:
    def test_symmetric_shape(self):
        g = fam.make_star_dumbbell(fam.DumbbellParams(1.0, 0.1, 0.1, 2))
        assert len(g.edges) == 5
        assert total_length(g) == pytest.approx(1.4)

    def test_pendants_dropped_at_zero_length(self):
        g = fam.make_star_dumbbell(fam.DumbbellParams(1.0, 0.0, 0.0, 1))
        assert same_shape(g, fam.make_path(1.0))

    def test_asymmetric_total(self):
        g = fam.make_star_dumbbell(fam.DumbbellParams(1.0, 0.3, 0.1, 3))
        assert total_length(g) == pytest.approx(1.0 + 3 * 0.4)

    def test_symmetric_family_geometry(self):
        g = fam.make_symmetric_dumbbell(2.0, 1.0, 3)
        assert g.edge("h").length == pytest.approx(0.5)
        assert len([e for e in g.edges if e.id != "h"]) == 6
        assert all(
            e.length == pytest.approx(0.25) for e in g.edges if e.id != "h"
        )
        assert total_length(g) == pytest.approx(2.0, abs=1e-12)
        assert diameter(g) == pytest.approx(1.0, abs=1e-12)

    def test_diameter_examples(self):
        assert diameter(fam.make_symmetric_dumbbell(2.0, 1.0, 5)) == pytest.approx(1.0)
        assert total_length(fam.make_symmetric_dumbbell(3.0, 1.0, 4)) == pytest.approx(3.0)

    def test_equals_two_glued_stars(self):
        star = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        glued = srg.glue_graphs(star, star, "v0", "v0")
        glued = srg.with_vertex_condition(glued, "lv0", VertexCondition.NATURAL)
        assert same_shape(glued, fam.make_symmetric_dumbbell(2.0, 1.0, 3))


class TestStarTree:
    def test_tree_and_geometry(self):
        g = fam.make_star_tree(3.0, 1.0, 3, 4)
        assert betti(g) == 0
        assert total_length(g) == pytest.approx(3.0)
        assert diameter(g) == pytest.approx(1.0)

    def test_k2_matches_dumbbell(self):
        t = fam.make_star_tree(2.0, 1.0, 2, 3)
        assert same_shape(t, fam.make_symmetric_dumbbell(2.0, 1.0, 3))


class TestBasics:
    def test_path(self):
        g = fam.make_basic("path", 1.0)
        assert diameter(g) == pytest.approx(1.0)

    def test_equilateral_star(self):
        g = fam.make_basic("equilateral_star", 3.0, 3)
        assert len(g.edges) == 3
        assert all(e.length == pytest.approx(1.0) for e in g.edges)

    def test_pendant_cycle(self):
        g = fam.make_basic("pendant_cycle", 0.5, 0.7)
        assert betti(g) == 1
        assert diameter(g) == pytest.approx(2 * 0.5 + 2 * 0.7)

    def test_unknown_kind(self):
        with pytest.raises(GraphError, match="unknown basic family"):
            fam.make_basic("moebius", 1.0)


class TestStarSecular:
    def test_reference_root(self):
        p = fam.StarParams(1.0, 0.5, 3)
        k = 2 * math.pi / 3
        assert fam.star_secular(p, k) == pytest.approx(0.0, abs=1e-12)
        assert fam.star_mu1(p) == pytest.approx((2 * math.pi / 3) ** 2, rel=1e-12)

    def test_limit_toward_point_mass(self):
        # roots approach the smallest root of cos(kD) = k (L-D) sin(kD)
        from qglab import bounds as bnd

        L, D = 1.0, 0.5
        target = bnd.omega_star_limit(L, D).omega_sq
        prev_gap = None
        for n in (8, 16, 32, 64):
            gap = fam.star_mu1(fam.StarParams(L, D, n)) - target
            assert gap > 0
            if prev_gap is not None:
                assert gap < prev_gap
            prev_gap = gap
        assert prev_gap < 0.03

    def test_interval_limit_case(self):
        # as D -> L the pendants vanish and mu1 -> (pi / (2D))**2
        p = fam.StarParams(1.0, 0.999, 64)
        assert fam.star_mu1(p) == pytest.approx(math.pi**2 / 4, rel=1e-2)
