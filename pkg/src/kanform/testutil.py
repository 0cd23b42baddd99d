"""Randomized data generators shared by the verification suite and tests."""

from __future__ import annotations

import numpy as np

from .chains import BarTuple, TotalChain
from .simplicial import FreeSimplicialGroup
from .words import Word, gen_word


def random_word(K: FreeSimplicialGroup, q: int, rng: np.random.Generator,
                max_letters: int = 3) -> Word:
    """A random reduced word in the degree-q alphabet (possibly identity)."""
    gens = K.generators(q)
    w = Word(())
    if not gens:
        return w
    for _ in range(int(rng.integers(0, max_letters + 1))):
        g = gens[int(rng.integers(0, len(gens)))]
        w = w * gen_word(g, int(rng.choice([-1, 1])))
    return w


def random_chain(K: FreeSimplicialGroup, rng: np.random.Generator,
                 k_max: int = 3, q_max: int = 2, terms: int = 4) -> TotalChain:
    """A random integer chain with bar degrees up to k_max, simplicial
    degrees up to min(q_max, K.max_degree)."""
    chain = TotalChain()
    q_max = min(q_max, K.max_degree)
    for _ in range(terms):
        k = int(rng.integers(1, k_max + 1))
        q = int(rng.integers(0, q_max + 1))
        entries = []
        for _ in range(k):
            w = random_word(K, q, rng)
            if w.is_identity:
                break
            entries.append(w)
        if len(entries) < k:
            continue
        chain.add(BarTuple(q, tuple(entries)), int(rng.choice([-2, -1, 1, 2])))
    return chain
