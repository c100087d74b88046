"""Exact solver: secular matrices, eigenvalues, eigenfunctions, edge
energies, and nodal decomposition."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from qglab import families as fam
from qglab import spectral as sp
from qglab.graph import GraphPoint, MetricGraph, total_length
from qglab.verify import RandomGraphSpec, random_graph

PI = math.pi


class TestSecularMatrix:
    def test_neumann_interval_singular_at_multiples_of_pi(self):
        g = fam.make_path(1.0)
        for m in (1, 2, 3):
            assert sp.secular_value(g, None, m * PI) < 1e-10
        assert sp.secular_value(g, None, PI / 2) > 1e-3

    def test_mixed_interval_singular_at_half_integers(self):
        g = fam.make_path(1.0)
        for m in (1, 2):
            assert sp.secular_value(g, ["a"], (m - 0.5) * PI) < 1e-10
        assert sp.secular_value(g, ["a"], PI) > 1e-3

    def test_loop_two_dimensional_nullspace(self):
        g = fam.make_loop(1.0)
        A = sp.secular_matrix(g, None, 2 * PI)
        s = np.linalg.svd(A, compute_uv=False)
        assert s[-1] < 1e-12 and s[-2] < 1e-12

    def test_matrix_size(self):
        g = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        A = sp.secular_matrix(g, None, 1.0)
        assert A.shape == (8, 8)

    def test_star_secular_cross_check(self):
        g = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        assert sp.secular_value(g, None, 2 * PI / 3) < 1e-10


class TestEigenvalues:
    def test_interval_natural(self):
        spec = sp.eigenvalues(fam.make_path(1.0), count=3)
        assert spec.values() == pytest.approx([0.0, PI**2, 4 * PI**2], abs=1e-8)

    def test_zero_mode_only_without_dirichlet(self):
        spec = sp.eigenvalues(fam.make_path(1.0), dirichlet=["a"], count=2)
        assert spec.values() == pytest.approx([PI**2 / 4, 9 * PI**2 / 4], abs=1e-8)
        assert spec.entries[0].lam > 0

    def test_equilateral_three_star(self):
        spec = sp.eigenvalues(fam.make_equilateral_star(3.0, 3), count=4)
        mults = [(round(e.lam, 8), e.multiplicity) for e in spec.entries]
        assert mults == [
            (0.0, 1),
            (round(PI**2 / 4, 8), 2),
            (round(PI**2, 8), 1),
        ]

    def test_loop_double_eigenvalues(self):
        spec = sp.eigenvalues(fam.make_loop(1.0), count=5)
        assert [e.multiplicity for e in spec.entries] == [1, 2, 2]
        assert spec.entries[1].lam == pytest.approx(4 * PI**2, abs=1e-7)
        assert spec.entries[2].lam == pytest.approx(16 * PI**2, abs=1e-7)

    def test_star_reference(self):
        g = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        assert sp.nth_eigenvalue(g, 1) == pytest.approx((2 * PI / 3) ** 2, abs=1e-9)

    def test_independent_of_scan_step(self):
        g = random_graph(RandomGraphSpec(seed=17, betti=1))
        a = sp.eigenvalues(g, count=4, opts=sp.SolverOptions(cross_check="none")).values(4)
        b = sp.eigenvalues(
            g, count=4, opts=sp.SolverOptions(cross_check="none", scan_step_factor=0.35)
        ).values(4)
        assert a == pytest.approx(b, abs=1e-9)

    def test_fem_guard_detects_missing_eigenvalue(self):
        g = fam.make_path(1.0)
        dset = frozenset()
        ok, _ = sp._fem_cross_check(g, dset, [0.0, PI**2, 4 * PI**2], sp.DEFAULT_OPTIONS)
        assert ok
        # drop the middle eigenvalue: pairing must fail
        bad, _ = sp._fem_cross_check(g, dset, [0.0, 4 * PI**2], sp.DEFAULT_OPTIONS)
        assert not bad

    def test_weyl_count_window(self):
        for g in (
            fam.make_path(1.0),
            fam.make_loop(1.0),
            fam.make_equilateral_star(2.0, 3),
            random_graph(RandomGraphSpec(seed=3, betti=1)),
        ):
            L = total_length(g)
            K = 20 * PI / L
            ev = sp._SecularEvaluator(g, frozenset())
            roots, _ = sp._scan_window(
                ev, 0.9 / L, K, PI / (8 * L), sp.DEFAULT_OPTIONS
            )
            count = sum(m for _, m in roots)
            V = len(g.vertices)
            assert abs(count - 20) <= V + 2


class TestEigenfunctions:
    def test_interval_cosine(self):
        ep = sp.eigenfunction(fam.make_path(1.0), None, PI**2)[0]
        w = ep.waves[0]
        assert w.a == pytest.approx(math.sqrt(2), abs=1e-8)
        assert abs(w.b) < 1e-8
        # single interior zero at 1/2
        assert abs(w.value(ep.k, 0.5)) < 1e-9

    def test_constant_mode(self):
        g = fam.make_equilateral_star(2.0, 4)
        ep = sp.eigenfunction(g, None, 0.0)[0]
        assert all(w.a == pytest.approx(1 / math.sqrt(2)) for w in ep.waves)

    def test_residuals_and_normalization_random(self):
        for seed in range(8):
            g = random_graph(RandomGraphSpec(seed=seed, betti=seed % 2))
            spec = sp.eigenvalues(g, count=4, opts=sp.SolverOptions(cross_check="none"))
            for entry in spec.entries:
                for ep in sp.eigenfunction(g, None, entry.lam):
                    norm = sp.l2_inner(g, ep, ep)
                    assert norm == pytest.approx(1.0, abs=1e-9)

    def test_orthogonality_distinct_eigenvalues(self):
        for seed in (0, 5, 11):
            g = random_graph(RandomGraphSpec(seed=seed, betti=seed % 2))
            spec = sp.eigenvalues(g, count=4, opts=sp.SolverOptions(cross_check="none"))
            pairs = []
            for entry in spec.entries:
                pairs.extend(sp.eigenfunction(g, None, entry.lam))
            for i in range(len(pairs)):
                for j in range(i + 1, len(pairs)):
                    assert abs(sp.l2_inner(g, pairs[i], pairs[j])) <= 1e-8

    def test_star_lowest_mode_structure(self):
        """Positive, increasing away from the pinned vertex, and invariant
        under pendant permutations."""
        g = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        lam = sp.nth_eigenvalue(g, 1)
        ep = sp.eigenfunction(g, None, lam)[0]
        if sp.vertex_value(g, ep, "c") < 0:
            ep = sp.Eigenpair(
                ep.lam, ep.k,
                tuple(sp.EdgeWave(w.edge, -w.a, -w.b) for w in ep.waves),
                ep.multiplicity, ep.normalized,
            )
        w0 = ep.wave("e0")
        xs = np.linspace(0, g.edge("e0").length, 9)
        vals = [w0.value(ep.k, x) for x in xs]
        assert vals[0] == pytest.approx(0.0, abs=1e-9)
        assert all(b > a for a, b in zip(vals, vals[1:]))
        pendant_waves = {(round(ep.wave(f"p{i}").a, 10), round(ep.wave(f"p{i}").b, 10))
                         for i in (1, 2, 3)}
        assert len(pendant_waves) == 1
        # pendant values keep increasing toward the tips
        wp = ep.wave("p1")
        pv = [wp.value(ep.k, x) for x in np.linspace(0, g.edge("p1").length, 9)]
        assert all(b > a for a, b in zip(pv, pv[1:]))

    def test_dumbbell_gap_simple_zero_in_handle(self):
        g = fam.make_symmetric_dumbbell(2.0, 1.0, 3)
        lam = sp.nth_eigenvalue(g, 2)
        eps = sp.eigenfunction(g, None, lam)
        assert eps[0].multiplicity == 1
        w = eps[0].wave("h")
        zeros = sp._edge_zeros(eps[0].k, w, g.edge("h").length)
        assert len(zeros) == 1
        assert zeros[0] == pytest.approx(g.edge("h").length / 2, abs=1e-8)

    def test_not_an_eigenvalue(self):
        with pytest.raises(sp.NotAnEigenvalueError):
            sp.eigenfunction(fam.make_path(1.0), None, 5.0)

    def test_zero_with_dirichlet_rejected(self):
        with pytest.raises(sp.NotAnEigenvalueError):
            sp.eigenfunction(fam.make_path(1.0), ["a"], 0.0)


class TestIntegrals:
    """The closed-form trig integrals against numerical quadrature."""

    @pytest.mark.parametrize("k,l", [(1.3, 0.7), (4.0, 1.0), (0.31, 2.4)])
    def test_same_k(self, k, l):
        rng = np.random.default_rng(42)
        a1, b1, a2, b2 = rng.uniform(-2, 2, 4)
        exact = sp._same_k_integral(k, l, a1, b1, a2, b2)
        num, _ = quad(
            lambda x: (a1 * math.cos(k * x) + b1 * math.sin(k * x))
            * (a2 * math.cos(k * x) + b2 * math.sin(k * x)),
            0.0,
            l,
        )
        assert exact == pytest.approx(num, abs=1e-10)

    @pytest.mark.parametrize("k1,k2,l", [(1.0, 2.3, 0.9), (5.0, 0.4, 1.7), (2.0, 2.0 + 1e-14, 1.0)])
    def test_cross_k(self, k1, k2, l):
        rng = np.random.default_rng(7)
        a1, b1, a2, b2 = rng.uniform(-2, 2, 4)
        exact = sp._cross_k_integral(k1, a1, b1, k2, a2, b2, l)
        num, _ = quad(
            lambda x: (a1 * math.cos(k1 * x) + b1 * math.sin(k1 * x))
            * (a2 * math.cos(k2 * x) + b2 * math.sin(k2 * x)),
            0.0,
            l,
        )
        assert exact == pytest.approx(num, abs=1e-10)

    def test_constant_against_wave(self):
        k2, l = 1.7, 1.3
        exact = sp._cross_k_integral(0.0, 2.0, 0.0, k2, 0.5, -0.25, l)
        num, _ = quad(lambda x: 2.0 * (0.5 * math.cos(k2 * x) - 0.25 * math.sin(k2 * x)), 0, l)
        assert exact == pytest.approx(num, abs=1e-12)


class TestRayleigh:
    def test_eigenfunction_gives_eigenvalue(self):
        g = fam.make_path(1.0)
        ep = sp.eigenfunction(g, None, PI**2)[0]
        assert sp.rayleigh_quotient(g, None, ep) == pytest.approx(PI**2, rel=1e-12)

    def test_constant_gives_zero(self):
        g = fam.make_equilateral_star(2.0, 3)
        ep = sp.eigenfunction(g, None, 0.0)[0]
        assert sp.rayleigh_quotient(g, None, ep) == pytest.approx(0.0, abs=1e-14)

    def test_linear_ramp_on_dirichlet_interval(self):
        g = fam.make_path(1.0)
        f = sp.PiecewiseLinear((("e", 0.0, 1.0),))
        q = sp.rayleigh_quotient(g, ["a"], f)
        assert q == pytest.approx(3.0, rel=1e-12)
        assert q >= PI**2 / 4

    def test_dirichlet_violation_rejected(self):
        g = fam.make_path(1.0)
        f = sp.PiecewiseLinear((("e", 1.0, 1.0),))
        with pytest.raises(sp.InadmissibleFunctionError):
            sp.rayleigh_quotient(g, ["a"], f)

    def test_discontinuity_rejected(self):
        g = fam.make_equilateral_star(2.0, 2)
        f = sp.PiecewiseLinear((("e1", 0.0, 1.0), ("e2", 5.0, 0.0)))
        with pytest.raises(sp.InadmissibleFunctionError):
            sp.rayleigh_quotient(g, None, f)

    def test_upper_bound_for_dirichlet_problem(self):
        # any admissible test function sits above the first eigenvalue
        g = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        values = [("e0", 0.0, 1.0)] + [(f"p{i}", 1.0, 1.0) for i in (1, 2, 3)]
        q = sp.rayleigh_quotient(g, None, sp.PiecewiseLinear(tuple(values)))
        assert q >= sp.nth_eigenvalue(g, 1) - 1e-9


class TestEdgeEnergy:
    def test_interval_value(self):
        g = fam.make_path(1.0)
        ep = sp.eigenfunction(g, None, PI**2)[0]
        assert sp.pruefer_amplitude(g, ep, "e") == pytest.approx(2 * PI**2, rel=1e-9)

    def test_zero_on_silent_edge(self):
        # antisymmetric pair mode on the equilateral star: vanishing third edge
        g = fam.make_equilateral_star(3.0, 3)
        k = PI / 2
        norm = math.sqrt(2 * sp._same_k_integral(k, 1.0, 0.0, 1.0, 0.0, 1.0))
        waves = (
            sp.EdgeWave("e1", 0.0, 1.0 / norm),
            sp.EdgeWave("e2", 0.0, -1.0 / norm),
            sp.EdgeWave("e3", 0.0, 0.0),
        )
        ep = sp.Eigenpair(k * k, k, waves, 2, True)
        assert sp.pruefer_amplitude(g, ep, "e3") == 0.0

    def test_star_energy_balance_at_centre(self):
        """Kirchhoff at the centre forces the distinguished edge's energy to
        equal n**2 (pendant energy - lam psi(c)**2) + lam psi(c)**2."""
        g = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        lam = sp.nth_eigenvalue(g, 1)
        ep = sp.eigenfunction(g, None, lam)[0]
        e0 = sp.pruefer_amplitude(g, ep, "e0")
        ep1 = sp.pruefer_amplitude(g, ep, "p1")
        psi_c = sp.vertex_value(g, ep, "c")
        n = 3
        assert e0 == pytest.approx(
            n**2 * (ep1 - lam * psi_c**2) + lam * psi_c**2, rel=1e-9
        )

    def test_requires_positive_lam(self):
        g = fam.make_path(1.0)
        ep = sp.eigenfunction(g, None, 0.0)[0]
        with pytest.raises(sp.SpectralError):
            sp.pruefer_amplitude(g, ep, "e")


class TestHadamard:
    def test_interval_closed_form(self):
        for L in (1.0, 1.7):
            g = fam.make_path(L)
            lam = sp.nth_eigenvalue(g, 2)
            d = sp.hadamard_derivative(g, None, lam, "e")
            assert d == pytest.approx(-2 * PI**2 / L**3, rel=1e-8)

    def test_finite_difference_tree(self):
        opts = sp.SolverOptions(tol_k=1e-13, cross_check="none")
        g = random_graph(RandomGraphSpec(seed=23, min_edges=4, max_edges=5))
        lam = sp.nth_eigenvalue(g, 2, opts=opts)
        eid = g.edges[1].id
        pred = sp.hadamard_derivative(g, None, lam, eid, opts)
        h = 1e-4
        gp = MetricGraph.of(
            [(v.id, v.condition) for v in g.vertices],
            [(e.id, e.u, e.v, e.length + (h if e.id == eid else 0.0)) for e in g.edges],
        )
        gm = MetricGraph.of(
            [(v.id, v.condition) for v in g.vertices],
            [(e.id, e.u, e.v, e.length - (h if e.id == eid else 0.0)) for e in g.edges],
        )
        fd = (sp.nth_eigenvalue(gp, 2, opts=opts) - sp.nth_eigenvalue(gm, 2, opts=opts)) / (2 * h)
        assert abs(fd - pred) <= 1e-5

    def test_rejects_degenerate(self):
        g = fam.make_loop(1.0)
        lam = sp.nth_eigenvalue(g, 2)
        with pytest.raises(sp.SpectralError, match="simple"):
            sp.hadamard_derivative(g, None, lam, "e")


class TestNodalDomains:
    def test_interval_splits_in_half(self):
        g = fam.make_path(1.0)
        ep = sp.eigenfunction(g, None, PI**2)[0]
        domains = sp.nodal_domains(g, ep)
        assert len(domains) == 2
        for dom in domains:
            assert total_length(dom.graph) == pytest.approx(0.5, abs=1e-9)
            assert sp.nth_eigenvalue(dom.graph, 1) == pytest.approx(PI**2, abs=1e-7)

    def test_dumbbell_domains_are_stars(self):
        g = fam.make_symmetric_dumbbell(2.0, 1.0, 3)
        lam = sp.nth_eigenvalue(g, 2)
        ep = sp.eigenfunction(g, None, lam)[0]
        domains = sp.nodal_domains(g, ep)
        assert len(domains) == 2
        from qglab import same_shape

        star = fam.make_star(fam.StarParams(1.0, 0.5, 3))
        for dom in domains:
            assert same_shape(dom.graph, star)
            assert sp.nth_eigenvalue(dom.graph, 1) == pytest.approx(lam, abs=1e-8)

    def test_loop_basis_vector_gives_two_domains(self):
        g = fam.make_loop(1.0)
        lam = sp.nth_eigenvalue(g, 2)
        for ep in sp.eigenfunction(g, None, lam):
            domains = sp.nodal_domains(g, ep)
            assert len(domains) == 2

    def test_restriction_is_component_eigenfunction(self):
        g = fam.make_path(1.0)
        ep = sp.eigenfunction(g, None, 4 * PI**2)[0]
        domains = sp.nodal_domains(g, ep)
        assert len(domains) == 3
        for dom in domains:
            # the restricted wave satisfies the component's conditions
            comp_ep = sp.Eigenpair(dom.lam, dom.k, dom.waves, 1, False)
            for v in dom.graph.vertices:
                val = sp.vertex_value(dom.graph, comp_ep, v.id)
                if v.id.startswith("z"):
                    assert abs(val) < 1e-9

    def test_vanishing_edge_reported(self):
        g = fam.make_equilateral_star(3.0, 3)
        k = PI / 2
        waves = (
            sp.EdgeWave("e1", 0.0, 1.0),
            sp.EdgeWave("e2", 0.0, -1.0),
            sp.EdgeWave("e3", 0.0, 0.0),
        )
        ep = sp.Eigenpair(k * k, k, waves, 2, True)
        with pytest.raises(sp.EdgeVanishingError) as err:
            sp.nodal_domains(g, ep)
        assert "e3" in err.value.edges
