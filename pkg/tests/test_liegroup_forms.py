"""Matrix groups, invariant polynomials, equivariant connection forms."""

import numpy as np
import pytest

from kanform.liegroup.groups import (special_orthogonal, special_unitary,
                                     unitary)
from kanform.liegroup.polynomials import (chern_polynomial,
                                          invariance_residual, trace_form)
from kanform.liegroup.quadrature import simplex_rule
from kanform.liegroup.shulman import (OmegaQ, assemble_omega, cartan_delta_g,
                                      closedness_residuals, delta_natural,
                                      exterior_derivative_fd,
                                      restriction_residual, shulman_form)

RNG = np.random.default_rng(777)
SU2 = special_unitary(2)
BASIC = trace_form("basic")


class TestGroups:
    @pytest.mark.parametrize("G", [SU2, unitary(2), special_orthogonal(3)])
    def test_exp_lands_in_group(self, G):
        for _ in range(5):
            g = G.random_element(RNG)
            assert G.in_group(g)

    @pytest.mark.parametrize("G", [SU2, unitary(2), special_orthogonal(3)])
    def test_algebra_coords_round_trip(self, G):
        for _ in range(5):
            a = G.random_algebra(RNG)
            assert np.allclose(G.algebra_element(G.algebra_coords(a)), a)

    def test_exp_log_inverse(self):
        g = SU2.random_element(RNG, scale=0.5)
        assert np.allclose(SU2.exp(SU2.log(g)), g)


class TestQuadrature:
    def test_simplex_volumes(self):
        import math
        for q in (1, 2, 3):
            _, w = simplex_rule(q)
            assert np.isclose(w.sum(), 1.0 / math.factorial(q))

    def test_monomial_on_triangle(self):
        pts, w = simplex_rule(2)
        # integral of t0 * t1 over the triangle is 1/24
        assert np.isclose(np.sum(w * pts[:, 0] * pts[:, 1]), 1.0 / 24.0)


class TestPolynomials:
    def test_invariance(self):
        for Q in (BASIC, chern_polynomial(1, 2), chern_polynomial(2, 2)):
            G = SU2 if Q is BASIC else unitary(2)
            assert invariance_residual(Q, G, RNG) < 1e-12

    def test_basic_normalization(self):
        X = SU2.random_algebra(RNG)
        Y = SU2.random_algebra(RNG)
        assert np.isclose(BASIC(X, Y), -np.trace(X @ Y) / (8 * np.pi ** 2))

    def test_chern_one_is_scaled_trace(self):
        G = unitary(2)
        Q = chern_polynomial(1, 2)
        X = G.random_algebra(RNG)
        assert np.isclose(Q(X), (1j / (2 * np.pi)) * np.trace(X))


class TestShulmanForms:
    def test_cartan_three_form_formula(self):
        # the one-edge component of the basic form is Q(x, [y, z]) exactly
        lam = shulman_form(SU2, BASIC, 1)
        for _ in range(5):
            g = [SU2.random_element(RNG)]
            xs = [[SU2.random_algebra(RNG)] for _ in range(3)]
            val = lam(g, None, xs)
            ref = BASIC(xs[0][0], xs[1][0] @ xs[2][0] - xs[2][0] @ xs[1][0])
            assert abs(val - ref) < 1e-12

    def test_moment_only_component_vanishes(self):
        omega = assemble_omega(SU2, BASIC)
        form = omega.component(1, 2)  # moment slot filled, no tangent legs
        for _ in range(5):
            gs = [SU2.random_element(RNG) for _ in range(2)]
            X = SU2.random_algebra(RNG)
            assert abs(form(gs, X, [])) < 1e-15

    def test_top_shulman_form_is_closed(self):
        lam = shulman_form(SU2, BASIC, 1)
        dlam = exterior_derivative_fd(SU2, lam)
        for _ in range(3):
            gs = [SU2.random_element(RNG)]
            vs = [[SU2.random_algebra(RNG)] for _ in range(4)]
            assert abs(dlam(gs, None, vs)) < 1e-9

    def test_ladder_step(self):
        # d of the two-edge component cancels the nerve coboundary of the
        # one-edge component
        lam1 = shulman_form(SU2, BASIC, 1)
        lam2 = shulman_form(SU2, BASIC, 2)
        dlam2 = exterior_derivative_fd(SU2, lam2)
        nat = delta_natural(SU2, lam1)
        for _ in range(3):
            gs = [SU2.random_element(RNG) for _ in range(2)]
            vs = [[SU2.random_algebra(RNG) for _ in range(2)] for _ in range(3)]
            assert abs(dlam2(gs, None, vs) + nat(gs, None, vs)) < 1e-6

    def test_equivariant_closedness(self):
        omega = assemble_omega(SU2, BASIC)
        res = closedness_residuals(omega, np.random.default_rng(5), samples=2)
        assert max(res.values()) < 1e-8

    def test_restriction_to_moment_free_layer(self):
        omega = assemble_omega(SU2, BASIC)
        assert restriction_residual(omega, np.random.default_rng(6),
                                    samples=2) < 1e-12
