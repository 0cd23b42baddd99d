"""The chain/form pairing and its differential identity."""

import numpy as np
import pytest

from kanform.chains import TotalChain, total_differential
from kanform.cyclelift import surface_cycle
from kanform.liegroup.groups import special_unitary
from kanform.liegroup.polynomials import trace_form
from kanform.liegroup.shulman import assemble_omega
from kanform.pairing import (RepPoint, pair, pairing_identity_residuals,
                             random_rep_point, random_rep_tangent)
from kanform.simplicial import builtin_surface

RNG = np.random.default_rng(99)
G = special_unitary(2)
K = builtin_surface(1)
OMEGA = assemble_omega(G, trace_form("basic"))


class TestRepPoints:
    def test_word_value_is_homomorphic(self):
        p = random_rep_point(K, G, 0, RNG)
        x = K.alphabet(0).parse("x1")
        y = K.alphabet(0).parse("y1")
        assert np.allclose(p.word_value(x * y),
                           p.word_value(x) @ p.word_value(y))

    def test_inverse_word_value(self):
        p = random_rep_point(K, G, 0, RNG)
        x = K.alphabet(0).parse("x1")
        assert np.allclose(p.word_value(x.inverse()),
                           np.linalg.inv(p.word_value(x)))

    def test_word_push_product_rule(self):
        # pushforward along a product agrees with finite differences
        p = random_rep_point(K, G, 0, RNG)
        v = random_rep_tangent(K, G, 0, RNG)
        w = K.alphabet(0).parse("x1*y1^-1*x1")
        h = 1e-6

        def moved(s):
            vals = {n: val @ G.exp(s * v[n]) for n, val in p.values.items()}
            return RepPoint(0, vals).word_value(w)

        base = p.word_value(w)
        fd = np.linalg.inv(base) @ (moved(h) - moved(-h)) / (2 * h)
        assert np.allclose(p.word_push(w, v)[1], fd, atol=1e-6)


class TestPairingIdentity:
    def test_identity_on_the_surface_cycle(self):
        chain, _ = surface_cycle(K)
        res = pairing_identity_residuals(OMEGA, K, chain, RNG, samples=2)
        assert max(res.values()) < 1e-8

    def test_negative_control_matches_boundary_pairing(self):
        chain, _ = surface_cycle(K)
        partial = TotalChain({t: c for t, c in chain.terms.items() if t.k == 1})
        assert total_differential(K, partial).terms  # genuinely not a cycle
        res = pairing_identity_residuals(OMEGA, K, partial, RNG, samples=2)
        # the identity compares against the pairing with the actual boundary,
        # so it holds even off cycles
        assert max(res.values()) < 1e-8

    def test_paired_form_degrees(self):
        chain, _ = surface_cycle(K)
        coll = pair(OMEGA, K, chain)
        degs = coll.bidegrees()
        assert (1, 0, 3) in degs  # simplex-one layer pairs with the 3-form
        assert (0, 0, 2) in degs  # bar-two layer pairs with the 2-form
