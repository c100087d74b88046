"""Transcendental roots and closed-form constants.

Reference values are frozen from independent bisection to 1e-12 (see the
inline brackets); the module under test must reproduce them.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qglab import bounds as bnd

# smallest positive solution of t*tan(t) = 1, bisected independently on
# (0, pi/2) to full double precision
T_TAN_T_EQUALS_1 = 0.8603335890193797


class TestGamma:
    def test_branch_above(self):
        assert bnd.gamma(3.0, 1.0, 3, 0) == pytest.approx(0.5)

    def test_branch_below(self):
        assert bnd.gamma(3.0, 1.0, 2, 5) == pytest.approx(1.0)

    def test_boundary_zero(self):
        assert bnd.gamma(1.0, 1.0, 2, 0) == pytest.approx(0.0)

    def test_negative_returned_not_raised(self):
        assert bnd.gamma(1.0, 1.9, 2, 0) < 0


class TestSpectralGapRoot:
    def test_reference_value(self):
        r = bnd.omega_spectral_gap(2.0, 1.0)
        assert r.omega == pytest.approx(2 * T_TAN_T_EQUALS_1, abs=1e-12)
        assert r.omega == pytest.approx(1.720667178038759, abs=1e-9)
        assert r.omega_sq == pytest.approx(2.960695537579868, abs=1e-9)

    def test_residual_invariant(self):
        for L, D in ((2.0, 1.0), (5.0, 0.3), (1.1, 1.0)):
            r = bnd.omega_spectral_gap(L, D)
            assert r.residual <= 1e-12 * (1 + r.omega)

    def test_interval_limit(self):
        # as D -> L the mass vanishes and the equation tends to cos(wL/2) = 0
        r = bnd.omega_spectral_gap(1.0, 1.0 - 1e-12)
        assert r.omega == pytest.approx(math.pi, rel=1e-6)

    def test_rejects_bad_domain(self):
        with pytest.raises(bnd.BoundsError):
            bnd.omega_spectral_gap(1.0, 1.0)

    def test_two_sided_bound_grid(self):
        for L in np.linspace(0.3, 10, 20):
            for frac in np.linspace(0.05, 0.95, 20):
                D = float(L * frac)
                w2 = bnd.omega_spectral_gap(float(L), D).omega_sq
                assert 1.0 / (L * D) < w2 < 12.0 / (L * D)


class TestHigherRoot:
    def test_matches_gap_equation(self):
        # gamma(3,1,3,0) = 0.5 gives the same equation as the (2,1) gap root
        r = bnd.omega_higher(3.0, 1.0, 3, 0)
        assert r.omega == pytest.approx(bnd.omega_spectral_gap(2.0, 1.0).omega, abs=1e-14)

    def test_small_diameter_asymptotics(self):
        # cot expansion: w^2 = 2/(D*gamma + D^2/6) + higher order
        L, D, k = 1.0, 1e-3, 2
        gam = bnd.gamma(L, D, k, 0)
        r = bnd.omega_higher(L, D, k, 0)
        assert r.omega_sq == pytest.approx(2.0 / (D * gam + D * D / 6.0), rel=1e-6)

    def test_two_sided_bound(self):
        for (L, D, k, beta) in ((3.0, 1.0, 3, 0), (4.0, 0.8, 4, 1), (2.0, 0.5, 2, 0)):
            gam = bnd.gamma(L, D, k, beta)
            r = bnd.omega_higher(L, D, k, beta)
            assert 2.0 / (D * gam + D * D / 2.0) <= r.omega_sq + 1e-12
            if D * gam > D * D / 6.0:
                assert r.omega_sq <= 2.0 / (D * gam - D * D / 6.0) + 1e-12

    def test_gamma_gate(self):
        with pytest.raises(bnd.BoundsError, match="hypothesis"):
            bnd.omega_higher(1.0, 0.9, 3, 0)


class TestStarLimitRoot:
    def test_substitution_identity_reference(self):
        assert bnd.omega_star_limit(1.0, 0.5).omega == pytest.approx(
            bnd.omega_spectral_gap(2.0, 1.0).omega, abs=1e-14
        )

    def test_equal_parameters(self):
        r = bnd.omega_star_limit(1.0, 1.0)
        assert r.omega == pytest.approx(math.pi / 2, abs=1e-15)
        assert r.omega_sq == pytest.approx(2.4674011002723395, abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(L=st.floats(0.2, 9.0), frac=st.floats(0.05, 0.99))
    def test_substitution_identity_random(self, L, frac):
        D = L * frac
        lhs = bnd.omega_star_limit(L / 2, D / 2).omega
        rhs = bnd.omega_spectral_gap(L, D).omega
        assert abs(lhs - rhs) <= 1e-12 * (1 + rhs)

    def test_monotone_in_diameter(self):
        L = 1.0
        values = [bnd.omega_star_limit(L, d).omega for d in np.linspace(0.1, 1.0, 12)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_derivative_formula(self):
        L, D = 1.0, 0.5
        h = 1e-6
        fd = (bnd.omega_star_limit(L, D + h).omega - bnd.omega_star_limit(L, D - h).omega) / (2 * h)
        assert bnd.omega_star_derivative_in_D(L, D) == pytest.approx(fd, abs=1e-6)
        assert bnd.omega_star_derivative_in_D(L, D) < 0


class TestPointMassRoot:
    def test_zero_mass(self):
        assert bnd.omega_point_mass(1.0, 0.0).omega == pytest.approx(math.pi / 2)

    def test_matches_star_limit(self):
        L, D = 2.0, 0.7
        assert bnd.omega_point_mass(D, L - D).omega == pytest.approx(
            bnd.omega_star_limit(L, D).omega, abs=1e-14
        )

    def test_heavy_mass_value(self):
        # frozen from the bisection oracle; consistent with the asymptotic
        # 1/(D*m + D^2/3) = 0.1071428...
        r = bnd.omega_point_mass(1.0, 9.0)
        assert r.omega == pytest.approx(0.3272846729640382, abs=1e-9)
        assert r.omega_sq == pytest.approx(0.10711525715717746, abs=1e-9)
        assert r.omega_sq == pytest.approx(1.0 / (9.0 + 1.0 / 3.0), rel=1e-3)


class TestConjectureRoot:
    def test_k2_equals_gap_equation(self):
        for (L, D) in ((2.0, 1.0), (3.0, 0.7)):
            assert bnd.omega_conjectured(L, D, 2).omega == pytest.approx(
                bnd.omega_spectral_gap(L, D).omega, abs=1e-14
            )

    def test_beta_zero_coincidence(self):
        assert bnd.omega_conjectured(3.0, 1.0, 3).omega == pytest.approx(
            bnd.omega_higher(3.0, 1.0, 3, 0).omega, abs=1e-14
        )

    def test_mass_monotonicity(self):
        # smaller mass (larger k) pushes the root up
        assert (
            bnd.omega_conjectured(3.0, 1.0, 4).omega
            > bnd.omega_conjectured(3.0, 1.0, 3).omega
        )

    def test_hypothesis_gate(self):
        with pytest.raises(bnd.BoundsError, match="hypothesis"):
            bnd.omega_conjectured(1.0, 1.0, 2)


class TestTwoSolvers:
    def test_bisect_vs_golden(self):
        for theta, c in ((0.5, 0.5), (1.0, 9.0), (0.25, 2.0), (2.0, 0.01)):
            w1, _ = bnd.smallest_root_bisect(theta, c)
            w2 = bnd.smallest_root_golden(theta, c)
            assert abs(w1 - w2) <= 1e-9 * (1 + w1)


class TestClosedFormConstants:
    def test_nicaise(self):
        (c,) = bnd.closed_form_bounds("nicaise", L=1.0)
        assert c.value == pytest.approx(math.pi**2)

    def test_neig2(self):
        lo, hi = bnd.closed_form_bounds("neig2", L=2.0, D=1.0)
        assert (lo.value, hi.value) == (pytest.approx(0.5), pytest.approx(6.0))

    def test_friedlander_variants(self):
        printed, candidate = bnd.closed_form_bounds("friedlander", L=1.0, k=3)
        assert printed.value == pytest.approx(4 * math.pi**2)
        assert candidate.value == pytest.approx(9 * math.pi**2 / 4)
        assert printed.provenance == "printed"
        assert candidate.provenance == "corrected-candidate"
        # the variants coincide at k = 2
        p2, c2 = bnd.closed_form_bounds("friedlander", L=1.0, k=2)
        assert p2.value == pytest.approx(c2.value)

    def test_prop14_printed_fails_spot_check(self):
        w2 = bnd.omega_star_limit(1.0, 0.5).omega_sq
        consts = {c.provenance + ":" + c.name: c.value
                  for c in bnd.closed_form_bounds("prop14", L=1.0, D=0.5)}
        assert consts["printed:omega_sq_lower"] == pytest.approx(4.0 / 0.375)
        assert consts["printed:omega_sq_lower"] > w2  # printed bound is violated
        assert consts["corrected-candidate:omega_sq_lower"] <= w2
        assert w2 <= consts["corrected-candidate:omega_sq_upper"]

    def test_prop14_corrected_reading_on_grid(self):
        for L in np.linspace(0.5, 4.0, 8):
            for frac in np.linspace(0.1, 1.0, 8):
                D = float(L * frac)
                w2 = bnd.omega_star_limit(float(L), D).omega_sq
                consts = {c.provenance + ":" + c.name: c.value
                          for c in bnd.closed_form_bounds("prop14", L=float(L), D=D)}
                assert consts["corrected-candidate:omega_sq_lower"] <= w2 + 1e-12
                assert w2 <= consts["corrected-candidate:omega_sq_upper"] + 1e-12
