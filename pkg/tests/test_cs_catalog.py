"""Circle-valued function plumbing and the U(n) generator catalog."""

import numpy as np

from kanform.cyclelift import threefold_cycle
from kanform.liegroup.groups import special_unitary
from kanform.liegroup.polynomials import trace_form
from kanform.liegroup.shulman import assemble_omega
from kanform.moduli import (CircleValue, alpha_form, minimal_sweep_plot,
                            un_generator_catalog)
from kanform.pairing import (h_exterior_derivative, random_rep_point,
                             random_rep_tangent)
from kanform.simplicial import builtin_threefold

G = special_unitary(2)
OMEGA = assemble_omega(G, trace_form("basic"))


class TestCircleValue:
    def test_reduction_mod_one(self):
        assert np.isclose(CircleValue(1.25).value, 0.25)
        assert np.isclose(CircleValue(-0.25).value, 0.75)


class TestSweepFamily:
    def test_sweep_collapses_simplex_boundary(self):
        K, chain, plot, loop = minimal_sweep_plot(G)
        params = loop(0.4)
        for t in (np.array([0.0, 0.3, 0.7]), np.array([0.5, 0.0, 0.5]),
                  np.array([0.2, 0.8, 0.0])):
            p = plot.point(2, params, t)
            assert np.allclose(p.values["sigma"], np.eye(2), atol=1e-12)

    def test_sweep_loop_closes(self):
        K, chain, plot, loop = minimal_sweep_plot(G)
        t = np.array([0.2, 0.3, 0.5])
        p0 = plot.point(2, loop(0.0), t)
        p1 = plot.point(2, loop(1.0), t)
        assert np.allclose(p0.values["sigma"], p1.values["sigma"], atol=1e-12)


class TestAlphaForm:
    def test_alpha_bounds_the_word_map_pullback(self):
        K = builtin_threefold(["x"], ["1"],
                              ["s0.x*r1*s0.x^-1", "r1", "1"])
        chain, _ = threefold_cycle(K)
        alpha, target = alpha_form(OMEGA, K, chain)
        dalpha = h_exterior_derivative(G, alpha)
        rng = np.random.default_rng(8)
        for _ in range(3):
            p = random_rep_point(K, G, 1, rng)
            vs = [random_rep_tangent(K, G, 1, rng) for _ in range(3)]
            assert abs(dalpha.evaluator(p, None, vs)
                       - target.evaluator(p, None, vs)) < 1e-8


class TestCatalog:
    def test_degrees_and_kinds(self):
        entries = un_generator_catalog(1, 2)
        table = {e["name"]: (e["degree"], e["kind"]) for e in entries}
        assert table["f_1"] == (0, "cycle_pairing")
        assert table["f_2"] == (2, "cycle_pairing")
        assert table["b_1^1"] == (1, "cell_pairing")
        assert table["b_2^2"] == (3, "cell_pairing")
        assert table["a_1"] == (2, "polynomial")
        assert table["a_2"] == (4, "polynomial")

    def test_cell_pairing_forms_are_closed(self):
        from kanform.liegroup.groups import unitary
        entries = un_generator_catalog(1, 2)
        G2 = unitary(2)
        rng = np.random.default_rng(9)
        b = next(e for e in entries if e["name"] == "b_1^1")
        form = b["collection"].form(0, 0, 1)
        dform = h_exterior_derivative(G2, form)
        K = b["K"]
        for _ in range(3):
            p = random_rep_point(K, G2, 0, rng)
            vs = [random_rep_tangent(K, G2, 0, rng) for _ in range(2)]
            assert abs(dform.evaluator(p, None, vs)) < 1e-10
