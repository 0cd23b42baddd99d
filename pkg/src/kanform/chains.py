"""The group-algebra bar / simplicial bicomplex of a free simplicial group.

Chains live in the bidegree-(k, q) spaces spanned by bar tuples
``[w_1 | ... | w_k]_q`` of nonidentity words in K_q.  The two differentials
are the reduced bar differential (within fixed q) and the alternating
entrywise face sum (within fixed k); the total differential combines them
with the sign (-1)^k on the face part.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .simplicial import FreeSimplicialGroup
from .snf import invariant_factors, smith_normal_form
from .words import Word


@dataclass(frozen=True)
class BarTuple:
    """A basis element [w_1 | ... | w_k] in simplicial degree q.

    Entries must be nonidentity words; the empty tuple (k = 0) is allowed
    only as an intermediate and never appears in stored chains.
    """

    q: int
    entries: Tuple[Word, ...]

    def __post_init__(self):
        if any(w.is_identity for w in self.entries):
            raise ValueError("bar tuple entries must be nonidentity words")

    @property
    def k(self) -> int:
        return len(self.entries)

    def __str__(self):
        return "[%s]_%d" % (" | ".join(str(w) for w in self.entries), self.q)


class TotalChain:
    """A finitely supported integer combination of bar tuples, possibly
    spread over several bidegrees."""

    def __init__(self, terms: Optional[Dict[BarTuple, int]] = None):
        self.terms: Dict[BarTuple, int] = {}
        if terms:
            for t, c in terms.items():
                self.add(t, c)

    def add(self, t: BarTuple, c: int):
        if c == 0:
            return
        new = self.terms.get(t, 0) + c
        if new:
            self.terms[t] = new
        else:
            del self.terms[t]

    def __add__(self, other: "TotalChain") -> "TotalChain":
        out = TotalChain(dict(self.terms))
        for t, c in other.terms.items():
            out.add(t, c)
        return out

    def __sub__(self, other: "TotalChain") -> "TotalChain":
        return self + other.scale(-1)

    def scale(self, c: int) -> "TotalChain":
        return TotalChain({t: c * v for t, v in self.terms.items()})

    def __neg__(self) -> "TotalChain":
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        return isinstance(other, TotalChain) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def component(self, k: int, q: int) -> "TotalChain":
        return TotalChain({t: c for t, c in self.terms.items() if t.k == k and t.q == q})

    def bidegrees(self) -> List[Tuple[int, int]]:
        return sorted({(t.k, t.q) for t in self.terms})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=lambda s: (s.k, s.q, str(s))):
            c = self.terms[t]
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else "%d*" % abs(c)
            parts.append("%s %s%s" % (sign, mag, t))
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text


def bar_singleton(q: int, *entries: Word, coeff: int = 1) -> TotalChain:
    return TotalChain({BarTuple(q, tuple(entries)): coeff})


# ---------------------------------------------------------------------------
# differentials
# ---------------------------------------------------------------------------

def _emit(out: TotalChain, q: int, entries: Iterable[Word], c: int):
    entries = tuple(entries)
    if any(w.is_identity for w in entries):
        return  # reduced complex: tuples with identity entries are zero
    if entries:
        out.add(BarTuple(q, entries), c)


def bar_differential(chain: TotalChain) -> TotalChain:
    """The reduced bar differential (decreases k by 1, fixes q).

    [w1|...|wk] -> [w2|...|wk] + sum_i (-1)^i [..|w_i w_{i+1}|..]
                   + (-1)^k [w1|...|w_{k-1}],  and zero for k = 1.
    """
    out = TotalChain()
    for t, c in chain.terms.items():
        k = t.k
        if k <= 1:
            continue
        e = t.entries
        _emit(out, t.q, e[1:], c)
        for i in range(1, k):
            merged = e[:i - 1] + (e[i - 1] * e[i],) + e[i + 1:]
            _emit(out, t.q, merged, c * (-1) ** i)
        _emit(out, t.q, e[:-1], c * (-1) ** k)
    return out


def face_differential(K: FreeSimplicialGroup, chain: TotalChain) -> TotalChain:
    """The alternating entrywise face sum (decreases q by 1, fixes k)."""
    out = TotalChain()
    for t, c in chain.terms.items():
        if t.q == 0:
            continue
        for p in range(t.q + 1):
            imgs = tuple(K.apply_face(t.q, p, w) for w in t.entries)
            _emit(out, t.q - 1, imgs, c * (-1) ** p)
    return out


def total_differential(K: FreeSimplicialGroup, chain: TotalChain) -> TotalChain:
    """d = d_bar + (-1)^k d_face on each bidegree-(k, q) component."""
    out = bar_differential(chain)
    for t, c in chain.terms.items():
        piece = face_differential(K, TotalChain({t: c}))
        out = out + piece.scale((-1) ** t.k)
    return out


def sharp_normalize(K: FreeSimplicialGroup, chain: TotalChain) -> TotalChain:
    """Drop tuples all of whose entries lie jointly in the image of some
    degeneracy s_j (such tuples vanish in the normalized complex)."""
    out = TotalChain()
    for t, c in chain.terms.items():
        degenerate = any(
            all(K.word_in_degeneracy_image(t.q, j, w) for w in t.entries)
            for j in range(t.q))
        if not degenerate:
            out.add(t, c)
    return out


# ---------------------------------------------------------------------------
# retraction to the cellular complex
# ---------------------------------------------------------------------------

def exponent_vector(K: FreeSimplicialGroup, q: int, w: Word) -> Dict[str, int]:
    """Exponent sums of w over the nondegenerate generators of K_q only."""
    base = {g.name for g in K.base_generators(q)}
    return {g.name: e for g, e in w.exponent_sums().items() if g.name in base}


@dataclass
class CellComplex:
    """A chain complex of free abelian groups with named cells per dimension."""

    cells: Dict[int, List[str]]
    boundary: Dict[Tuple[int, str], Dict[str, int]]  # (dim, cell) -> lower chain

    def top_dim(self) -> int:
        return max(self.cells) if self.cells else 0

    def boundary_matrix(self, n: int) -> np.ndarray:
        """Matrix of the boundary C_n -> C_{n-1} in the cell bases."""
        rows = self.cells.get(n - 1, [])
        cols = self.cells.get(n, [])
        M = np.zeros((len(rows), len(cols)), dtype=object)
        idx = {name: i for i, name in enumerate(rows)}
        for j, cell in enumerate(cols):
            for name, coef in self.boundary.get((n, cell), {}).items():
                M[idx[name], j] = coef
        return M


def cell_complex(K: FreeSimplicialGroup) -> CellComplex:
    """The cellular complex of the space modeled by K: one 0-cell plus one
    (q+1)-cell per nondegenerate degree-q generator, with boundary given by
    exponent sums of the alternating face words."""
    cells = K.cells()
    boundary: Dict[Tuple[int, str], Dict[str, int]] = {}
    for q, gens in sorted(K.base.items()):
        for g in gens:
            cname = K.cell_of_generator.get(g.name, g.name)
            chain: Dict[str, int] = {}
            if q >= 1:
                for p in range(q + 1):
                    vec = exponent_vector(K, q - 1, K.face_of_generator(q, g, p))
                    for name, e in vec.items():
                        lower = K.cell_of_generator.get(name, name)
                        chain[lower] = chain.get(lower, 0) - ((-1) ** p) * e
                chain = {n: c for n, c in chain.items() if c}
            boundary[(q + 1, cname)] = chain
    return CellComplex(cells=cells, boundary=boundary)


def retract_to_cellular(K: FreeSimplicialGroup, chain: TotalChain) -> Dict[Tuple[int, str], int]:
    """Project a total chain to the cellular complex.

    Only the bar-degree-1 column survives: [w]_q maps to the (q+1)-chain of
    exponent sums of w over the nondegenerate generators of K_q.
    """
    out: Dict[Tuple[int, str], int] = {}
    for t, c in chain.terms.items():
        if t.k != 1:
            continue
        for name, e in exponent_vector(K, t.q, t.entries[0]).items():
            key = (t.q + 1, K.cell_of_generator.get(name, name))
            val = out.get(key, 0) + c * e
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def cellular_homology(C: CellComplex, n: int) -> Tuple[int, List[int]]:
    """(betti number, torsion coefficients) of H_n of the cell complex."""
    dn = C.boundary_matrix(n)
    dn1 = C.boundary_matrix(n + 1)
    dim_n = len(C.cells.get(n, []))
    rank_n = len(invariant_factors(dn)) if dn.size else 0
    facs = [f for f in (invariant_factors(dn1) if dn1.size else [])]
    rank_n1 = len(facs)
    betti = dim_n - rank_n - rank_n1
    torsion = [f for f in facs if f > 1]
    return betti, torsion


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def chain_to_json(chain: TotalChain) -> List[dict]:
    out = []
    for t in sorted(chain.terms, key=lambda s: (s.k, s.q, str(s))):
        out.append({"coeff": chain.terms[t], "k": t.k, "q": t.q,
                    "tuple": [str(w) for w in t.entries]})
    return out


def chain_from_json(K: FreeSimplicialGroup, data: List[dict]) -> TotalChain:
    out = TotalChain()
    for item in data:
        q = int(item["q"])
        words = tuple(K.alphabet(q).parse(s) for s in item["tuple"])
        out.add(BarTuple(q, words), int(item["coeff"]))
    return out


def chain_dumps(chain: TotalChain) -> str:
    return json.dumps(chain_to_json(chain), indent=2)
