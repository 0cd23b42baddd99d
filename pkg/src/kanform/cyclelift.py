"""Construction of total cycles by lifting against the bar differential.

Two lifting backends solve the equation ``bar_differential(z) = b``:

* ``telescoping`` (bar degree 1 targets): peel the leading letter of each
  word, [a*w' ] picking up -[a | w'] plus an inverse-pair correction
  [g | g^-1] for negative letters; succeeds exactly when the exponent sums
  of the target vanish generator-wise.
* ``linear`` (bar degree >= 2): an integer linear solve, via Smith normal
  form, over a candidate basis generated from single-position splittings of
  the support tuples, closed under the bar differential to a given depth.

On top of these sit the surface 2-cycle, the 3-complex 3-cycle, and a
generic lift of cellular cycles of degree at most 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .chains import (BarTuple, TotalChain, bar_differential, bar_singleton,
                     cell_complex, chain_from_json, chain_to_json,
                     face_differential, total_differential)
from .simplicial import FreeSimplicialGroup, SimplicialError
from .snf import solve_integer
from .words import Word, gen_word


class LiftError(ValueError):
    """A lifting equation has no solution (or none was found)."""


@dataclass
class LiftCertificate:
    """Record of a solved equation bar_differential(solution) = target."""

    target: TotalChain
    solution: TotalChain
    method: str
    depth: int = 0

    def residual(self) -> TotalChain:
        return bar_differential(self.solution) - self.target

    def verify(self):
        if not self.residual().is_zero():
            raise LiftError("lift certificate failed re-verification")

    def to_json(self) -> dict:
        return {"target": chain_to_json(self.target),
                "solution": chain_to_json(self.solution),
                "method": self.method, "depth": self.depth}

    @staticmethod
    def from_json(K: FreeSimplicialGroup, data: dict) -> "LiftCertificate":
        cert = LiftCertificate(target=chain_from_json(K, data["target"]),
                               solution=chain_from_json(K, data["solution"]),
                               method=data["method"], depth=int(data.get("depth", 0)))
        cert.verify()
        return cert


# ---------------------------------------------------------------------------
# telescoping lift (bar degree 1)
# ---------------------------------------------------------------------------

def _telescope_word(q: int, w: Word) -> TotalChain:
    """z with bar_differential(z) = [w] - (abelianized residue of w)."""
    out = TotalChain()
    rest = w
    while len(rest) > 0:
        (g, e), tail = rest.letters[0], Word.reduce(list(rest)[1:])
        if e == 1:
            if not tail.is_identity:
                out.add(BarTuple(q, (gen_word(g), tail)), -1)
        else:
            if not tail.is_identity:
                out.add(BarTuple(q, (gen_word(g).inverse(), tail)), -1)
            out.add(BarTuple(q, (gen_word(g), gen_word(g).inverse())), 1)
        rest = tail
    return out


def _telescoping_lift(b: TotalChain) -> TotalChain:
    obstruction: Dict[str, int] = {}
    for t, c in b.terms.items():
        for g, e in t.entries[0].exponent_sums().items():
            val = obstruction.get(g.name, 0) + c * e
            if val:
                obstruction[g.name] = val
            else:
                obstruction.pop(g.name, None)
    if obstruction:
        raise LiftError("exponent obstruction %r: target is nonzero in the "
                        "abelianization" % (obstruction,))
    out = TotalChain()
    for t, c in b.terms.items():
        out = out + _telescope_word(t.q, t.entries[0]).scale(c)
    return out


# ---------------------------------------------------------------------------
# linear lift (bar degree >= 2)
# ---------------------------------------------------------------------------

def _splittings(t: BarTuple) -> List[BarTuple]:
    out = []
    for i, w in enumerate(t.entries):
        letters = list(w)
        for cut in range(1, len(letters)):
            u = Word.reduce(letters[:cut])
            v = Word.reduce(letters[cut:])
            if u.is_identity or v.is_identity:
                continue
            out.append(BarTuple(t.q, t.entries[:i] + (u, v) + t.entries[i + 1:]))
        # inverse pairs: their boundaries cancel stray single-entry terms
        # because the identity entry is killed by sharp normalization
        out.append(BarTuple(t.q, t.entries[:i] + (w, w.inverse()) + t.entries[i + 1:]))
        out.append(BarTuple(t.q, t.entries[:i] + (w.inverse(), w) + t.entries[i + 1:]))
    return out


def _linear_lift(b: TotalChain, depth: int) -> Tuple[TotalChain, int]:
    if b.is_zero():
        return TotalChain(), 0
    (k, q), = {(t.k, t.q) for t in b.terms}  # single bidegree expected
    candidates: set = set()
    explored: set = set()
    frontier = set(b.terms)
    used_depth = 0
    for d in range(depth):
        new_cands = set()
        for t in frontier:
            new_cands.update(_splittings(t))
        explored |= frontier
        new_cands -= candidates
        if not new_cands and d > 0:
            break
        candidates |= new_cands
        used_depth = d + 1
        boundary_tuples = set()
        for cand in new_cands:
            boundary_tuples.update(bar_differential(bar_singleton(q, *cand.entries)).terms)
        frontier = boundary_tuples - explored
        if not frontier:
            break
    cols = sorted(candidates, key=lambda t: (t.q, str(t)))
    row_index: Dict[BarTuple, int] = {}
    col_chains = []
    for cand in cols:
        col_chains.append(bar_differential(bar_singleton(q, *cand.entries)))
        for t in col_chains[-1].terms:
            row_index.setdefault(t, len(row_index))
    for t in b.terms:
        row_index.setdefault(t, len(row_index))
    A = np.zeros((len(row_index), len(cols)), dtype=object)
    for j, ch in enumerate(col_chains):
        for t, c in ch.terms.items():
            A[row_index[t], j] = c
    rhs = np.zeros(len(row_index), dtype=object)
    for t, c in b.terms.items():
        rhs[row_index[t]] = c
    x = solve_integer(A, rhs) if cols else None
    if x is None:
        raise LiftError("linear lift support exhausted (basis size %d, depth %d); "
                        "raise the closure depth" % (len(cols), depth))
    out = TotalChain()
    for cand, coef in zip(cols, x):
        out.add(cand, int(coef))
    return out, used_depth


def bar_lift(b: TotalChain, method: Optional[str] = None, depth: int = 3) -> LiftCertificate:
    """Solve bar_differential(z) = b, returning a re-verified certificate.

    Defaults: telescoping for bar-degree-1 targets, linear (with the given
    closure depth) otherwise.
    """
    if b.is_zero():
        cert = LiftCertificate(b, TotalChain(), method or "telescoping", 0)
        cert.verify()
        return cert
    degrees = {t.k for t in b.terms}
    if len(degrees) != 1:
        raise LiftError("target must be concentrated in one bar degree")
    k = degrees.pop()
    if method is None:
        method = "telescoping" if k == 1 else "linear"
    if method == "telescoping":
        if k != 1:
            raise LiftError("telescoping applies to bar-degree-1 targets only")
        cert = LiftCertificate(b, _telescoping_lift(b), "telescoping", 0)
    elif method == "linear":
        sol, used = _linear_lift(b, depth)
        cert = LiftCertificate(b, sol, "linear", used)
    else:
        raise LiftError("unknown lift method %r" % (method,))
    cert.verify()
    return cert


# ---------------------------------------------------------------------------
# the built-in cycles
# ---------------------------------------------------------------------------

def surface_cycle(K: FreeSimplicialGroup) -> Tuple[TotalChain, LiftCertificate]:
    """The total 2-cycle [r]_{1,1} + c_{2,0} on a surface group model."""
    r = next(g for g in K.base_generators(1) if g.name == "r")
    c11 = bar_singleton(1, gen_word(r))
    cert = bar_lift(face_differential(K, c11))
    cycle = c11 + cert.solution
    if not total_differential(K, cycle).is_zero():
        raise LiftError("surface cycle failed the boundary check")
    return cycle, cert


def threefold_cycle(K: FreeSimplicialGroup,
                    depth: int = 3) -> Tuple[TotalChain, List[LiftCertificate]]:
    """The total 3-cycle [sigma]_{1,2} + c_{2,1} + c_{3,0}."""
    sigma = next(g for g in K.base_generators(2) if g.name == "sigma")
    c12 = bar_singleton(2, gen_word(sigma))
    cert1 = bar_lift(face_differential(K, c12))
    c21 = cert1.solution
    cert2 = bar_lift(-face_differential(K, c21), depth=depth)
    cycle = c12 + c21 + cert2.solution
    if not total_differential(K, cycle).is_zero():
        raise LiftError("threefold cycle failed the boundary check")
    return cycle, [cert1, cert2]


def cycle_from_cellular(K: FreeSimplicialGroup,
                        z: Dict[Tuple[int, str], int],
                        depth: int = 3) -> TotalChain:
    """Lift a cellular cycle of degree r <= 3 to a total cycle retracting
    to it, built column by column with bar lifts."""
    if not z:
        return TotalChain()
    degrees = {d for d, _ in z}
    if len(degrees) != 1:
        raise LiftError("cellular chain must be homogeneous")
    r = degrees.pop()
    if not (1 <= r <= 3):
        raise LiftError("cellular lifting supports degrees 1..3")
    C = cell_complex(K)
    bdry: Dict[str, int] = {}
    for (_, cell), c in z.items():
        for name, e in C.boundary.get((r, cell), {}).items():
            bdry[name] = bdry.get(name, 0) + c * e
    if any(bdry.values()):
        raise LiftError("input cellular chain is not a cycle: boundary %r" % (bdry,))
    cell_to_gen = {K.cell_of_generator.get(g.name, g.name): g
                   for q in K.base for g in K.base[q]}
    top = TotalChain()
    for (_, cell), c in z.items():
        try:
            g = cell_to_gen[cell]
        except KeyError:
            raise LiftError("no generator carries the cell %r" % (cell,)) from None
        top.add(BarTuple(r - 1, (gen_word(g),)), c)
    cycle = top
    col = top
    k = 1
    while True:
        target = face_differential(K, col).scale((-1) ** (k + 1))
        if target.is_zero():
            break
        cert = bar_lift(target, depth=depth)
        col = cert.solution
        cycle = cycle + col
        k += 1
    if not total_differential(K, cycle).is_zero():
        raise LiftError("cellular lift failed the boundary check")
    return cycle
