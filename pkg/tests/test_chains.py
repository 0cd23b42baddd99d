"""Bicomplex chain algebra: differentials, normalization, retraction."""

import numpy as np
import pytest

from kanform.chains import (BarTuple, TotalChain, bar_differential,
                            cell_complex, cellular_homology, chain_dumps,
                            chain_from_json, chain_to_json, face_differential,
                            retract_to_cellular, sharp_normalize,
                            total_differential)
from kanform.simplicial import builtin_surface, minimal_threefold
from kanform.testutil import random_chain, random_word
from kanform.words import gen_word

K1 = builtin_surface(1)
K2 = builtin_surface(2)
KS = minimal_threefold()

RNG = np.random.default_rng(12345)


def assert_zero(chain):
    assert not chain.terms, "expected zero chain, got %s" % chain


class TestDifferentials:
    @pytest.mark.parametrize("K", [K1, K2, KS])
    def test_bar_differential_squares_to_zero(self, K):
        for _ in range(40):
            c = random_chain(K, RNG)
            assert_zero(bar_differential(bar_differential(c)))

    @pytest.mark.parametrize("K", [K1, K2, KS])
    def test_face_differential_squares_to_zero(self, K):
        for _ in range(40):
            c = random_chain(K, RNG, q_max=min(3, K.max_degree))
            assert_zero(face_differential(K, face_differential(K, c)))

    @pytest.mark.parametrize("K", [K1, K2, KS])
    def test_total_differential_squares_to_zero(self, K):
        for _ in range(40):
            c = sharp_normalize(K, random_chain(K, RNG))
            assert_zero(total_differential(K, total_differential(K, c)))

    def test_bar_differential_of_pair(self):
        # d[w1|w2] = [w2] - [w1 w2] + [w1]
        x = gen_word(next(g for g in K1.base_generators(0) if g.name == "x1"))
        y = gen_word(next(g for g in K1.base_generators(0) if g.name == "y1"))
        c = TotalChain()
        c.add(BarTuple(0, (x, y)), 1)
        d = bar_differential(c)
        expected = TotalChain()
        expected.add(BarTuple(0, (y,)), 1)
        expected.add(BarTuple(0, (x * y,)), -1)
        expected.add(BarTuple(0, (x,)), 1)
        assert d.terms == expected.terms

    def test_singleton_bar_differential_vanishes(self):
        x = gen_word(next(g for g in K1.base_generators(0) if g.name == "x1"))
        c = TotalChain()
        c.add(BarTuple(0, (x,)), 1)
        assert_zero(bar_differential(c))


class TestNormalization:
    def test_sharp_normalize_idempotent(self):
        for _ in range(20):
            c = random_chain(K1, RNG)
            n1 = sharp_normalize(K1, c)
            assert sharp_normalize(K1, n1).terms == n1.terms

    def test_degenerate_tuple_killed(self):
        g = next(g for g in K1.generators(1) if g.name == "s0.x1")
        c = TotalChain()
        c.add(BarTuple(1, (gen_word(g),)), 1)
        assert_zero(sharp_normalize(K1, c))


class TestRetraction:
    @pytest.mark.parametrize("K", [K1, K2, KS])
    def test_retraction_is_a_chain_map(self, K):
        C = cell_complex(K)
        for _ in range(30):
            c = random_chain(K, RNG, k_max=1, q_max=min(3, K.max_degree))
            lhs = retract_to_cellular(K, total_differential(K, c))
            ret = retract_to_cellular(K, c)
            rhs = {}
            for (dim, name), coeff in ret.items():
                for cell, bc in C.boundary.get((dim, name), {}).items():
                    rhs[cell] = rhs.get(cell, 0) + coeff * bc
            rhs = {cell: v for cell, v in rhs.items() if v}
            lhs = {cell: v for cell, v in lhs.items() if v}
            assert lhs == rhs

    def test_torus_cellular_homology(self):
        C = cell_complex(K1)
        assert cellular_homology(C, 0) == (1, [])
        assert cellular_homology(C, 1) == (2, [])
        assert cellular_homology(C, 2) == (1, [])


class TestSerialization:
    def test_round_trip(self):
        c = sharp_normalize(K1, random_chain(K1, RNG))
        data = chain_to_json(c)
        back = chain_from_json(K1, data)
        assert back.terms == c.terms

    def test_dumps_is_json(self):
        import json
        c = random_chain(K1, RNG)
        json.loads(chain_dumps(c))
