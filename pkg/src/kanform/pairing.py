"""Pairing chains of the bar bicomplex against nerve forms.

A word w in K_q evaluates any representation point of H_q = Hom(K_q, G) to
a group element; a bar tuple [w_1 | ... | w_k] evaluates to a point of G^k.
Pulling an equivariant nerve form back along this evaluation and summing
over a chain gives equivariant forms on the H_q, one package per simplicial
degree.  The total differential D on these packages combines d, delta_G,
and the alternating pullback along the maps H_q -> H_{q+1} induced by the
faces of K; the sign of the last term is fixed empirically by the pairing
identity and recorded here as sharp_sign.

Plots are finite-dimensional families probing the H_q jointly; integrating
paired forms over the simplex directions of a plot produces ordinary forms
on the parameter domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .chains import BarTuple, TotalChain, bar_differential
from .liegroup.groups import MatrixGroup
from .liegroup.shulman import (FD_STEP, EquivariantForm, OmegaQ, _directional)
from .simplicial import FreeSimplicialGroup
from .words import Word


# Sign with which the sharp (face-pullback) coboundary enters the total
# differential D on paired forms, as a function of the bidegree (i, j) of
# the form it acts on.  Fixed empirically by requiring D<Omega, c> =
# -<Omega, total boundary of c>, which vanishes on total cycles; (i + j)
# recovers the bar degree of the paired chain component via k = 2r - i - j.
def sharp_sign(i: int, j: int) -> int:
    return (-1) ** (i + j + 1)


@dataclass
class RepPoint:
    """A representation K_q -> G, given on the free generators."""

    q: int
    values: Dict[str, np.ndarray]

    def word_value(self, w: Word) -> np.ndarray:
        n = next(iter(self.values.values())).shape[0] if self.values else None
        out = None
        for g, e in w:
            m = self.values[g.name]
            m = m if e == 1 else np.linalg.inv(m)
            out = m if out is None else out @ m
        if out is None:
            raise ValueError("identity word needs an ambient dimension")
        return out

    def word_push(self, w: Word, tangent: Dict[str, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
        """(value, left-translated derivative) of the word map.

        The tangent assigns to each generator name a Lie algebra element a
        (the tangent g a at g); missing names mean zero.
        """
        factors = []
        tangents = []
        for g, e in w:
            m = self.values[g.name]
            a = tangent.get(g.name)
            if e == 1:
                factors.append(m)
                tangents.append(a)
            else:
                factors.append(np.linalg.inv(m))
                tangents.append(None if a is None else -(m @ a @ np.linalg.inv(m)))
        n = factors[0].shape[0]
        value = np.eye(n, dtype=complex)
        for f in factors:
            value = value @ f
        deriv = np.zeros((n, n), dtype=complex)
        suffix = np.eye(n, dtype=complex)
        for p in range(len(factors) - 1, -1, -1):
            if tangents[p] is not None:
                inv = np.linalg.inv(suffix)
                deriv = deriv + inv @ tangents[p] @ suffix
            suffix = factors[p] @ suffix
        return value, deriv


def random_rep_point(K: FreeSimplicialGroup, G: MatrixGroup, q: int,
                     rng: np.random.Generator) -> RepPoint:
    return RepPoint(q, {g.name: G.random_element(rng) for g in K.alphabet(q)})


def random_rep_tangent(K: FreeSimplicialGroup, G: MatrixGroup, q: int,
                       rng: np.random.Generator) -> Dict[str, np.ndarray]:
    return {g.name: G.random_algebra(rng) for g in K.alphabet(q)}


def evaluation_pushforward(tuple_: BarTuple, p: RepPoint,
                           tangents: Sequence[Dict[str, np.ndarray]]):
    """Evaluate a bar tuple at p: point in G^k plus pushed tangent lists."""
    gs = [p.word_value(w) for w in tuple_.entries]
    pushed = [[p.word_push(w, t)[1] for w in tuple_.entries] for t in tangents]
    return gs, pushed


@dataclass
class PairedForm:
    """An (i, j) equivariant form on H_q, evaluated on RepPoints with
    tangents given as generator-name -> algebra-element dicts."""

    q: int
    i: int
    j: int
    evaluator: Callable
    label: str = ""

    def __call__(self, p: RepPoint, X: Optional[np.ndarray],
                 tangents: Sequence[Dict[str, np.ndarray]]) -> complex:
        if len(tangents) != self.j:
            raise ValueError("form of degree %d got %d tangents" % (self.j, len(tangents)))
        return self.evaluator(p, X, tangents)


class PairedCollection:
    """The pairing of an assembled cocycle with a total chain: for each
    simplicial degree q and bidegree (i, j) an equivariant form on H_q."""

    def __init__(self, omega: OmegaQ, K: FreeSimplicialGroup, chain: TotalChain):
        self.omega = omega
        self.K = K
        self.chain = chain

    @property
    def total_degree(self) -> int:
        return self.omega.degree

    def bidegrees(self) -> List[Tuple[int, int, int]]:
        """(q, i, j) triples that can carry a nonzero paired form."""
        r = self.omega.Q.degree
        out = set()
        for t in self.chain.terms:
            if t.k > r:
                continue
            for a in range(0, r + 1):
                j = 2 * (r - a) - t.k
                if j >= 0:
                    out.add((t.q, 2 * a, j))
        return sorted(out)

    def form(self, q: int, i: int, j: int) -> PairedForm:
        r = self.omega.Q.degree
        a = i // 2
        terms = [(t, c) for t, c in self.chain.terms.items()
                 if t.q == q and t.k <= r and 2 * (r - a) - t.k == j]

        def evaluator(p, X, tangents):
            total = 0.0 + 0.0j
            for t, c in terms:
                comp = self.omega.component(a, t.k)
                gs, pushed = evaluation_pushforward(t, p, tangents)
                total += c * comp(gs, X, pushed)
            return total

        return PairedForm(q, i, j, evaluator, "<Omega,c>_{%d,%d,%d}" % (q, i, j))


def pair(omega: OmegaQ, K: FreeSimplicialGroup, chain: TotalChain) -> PairedCollection:
    return PairedCollection(omega, K, chain)


# ---------------------------------------------------------------------------
# differentials on paired forms
# ---------------------------------------------------------------------------

def h_exterior_derivative(G: MatrixGroup, form: PairedForm) -> PairedForm:
    """d on H_q via left-invariant frames per generator slot."""
    j = form.j

    def evaluator(p, X, tangents):
        total = 0.0 + 0.0j
        for s in range(j + 1):
            rest = [tangents[m] for m in range(j + 1) if m != s]

            def f(step, _s=s, _rest=rest):
                moved = {name: val @ G.exp(step * tangents[_s].get(name, np.zeros_like(val)))
                         for name, val in p.values.items()}
                return form(RepPoint(p.q, moved), X, _rest)

            total += (-1) ** s * _directional(f)
        for s in range(j + 1):
            for m in range(s + 1, j + 1):
                names = set(tangents[s]) | set(tangents[m])
                bracket = {}
                for name in names:
                    a = tangents[s].get(name)
                    b = tangents[m].get(name)
                    if a is not None and b is not None:
                        bracket[name] = a @ b - b @ a
                rest = [tangents[l] for l in range(j + 1) if l not in (s, m)]
                total += (-1) ** (s + m) * form(p, X, [bracket] + rest)
        return total

    return PairedForm(form.q, form.i, j + 1, evaluator, "d(%s)" % form.label)


def h_delta_g(G: MatrixGroup, form: PairedForm) -> PairedForm:
    """delta_G on H_q: contract with minus the conjugation fundamental field."""
    if form.j < 1:
        raise ValueError("delta_G needs form degree >= 1")

    def evaluator(p, X, tangents):
        xm = {name: np.linalg.inv(g) @ X @ g - X for name, g in p.values.items()}
        return -form(p, X, [xm] + list(tangents))

    return PairedForm(form.q, form.i + 2, form.j - 1, evaluator, "delta_G(%s)" % form.label)


def sharp_coboundary(K: FreeSimplicialGroup, form: PairedForm) -> PairedForm:
    """Alternating pullback along the coface maps H_q -> H_{q+1} given by
    precomposition with the faces K_{q+1} -> K_q; input form lives on
    H_{q+1}, output on H_q (no sign convention applied here)."""
    q1 = form.q
    q = q1 - 1

    def evaluator(p, X, tangents):
        total = 0.0 + 0.0j
        for face_idx in range(q1 + 1):
            face_words = {g.name: K.face_of_generator(q1, g, face_idx)
                          for g in K.alphabet(q1)}
            values = {}
            pushed = [{} for _ in tangents]
            for name, w in face_words.items():
                if w.is_identity:
                    n = next(iter(p.values.values())).shape[0]
                    values[name] = np.eye(n, dtype=complex)
                    continue
                values[name] = p.word_value(w)
                for s, t in enumerate(tangents):
                    pushed[s][name] = p.word_push(w, t)[1]
            total += (-1) ** face_idx * form(RepPoint(q1, values), X, pushed)
        return total

    return PairedForm(q, form.i, form.j, evaluator, "sharp(%s)" % form.label)


def pairing_identity_residuals(omega: OmegaQ, K: FreeSimplicialGroup,
                               chain: TotalChain, rng: np.random.Generator,
                               samples: int = 5,
                               max_q: Optional[int] = None) -> Dict[Tuple[int, int, int], float]:
    """Residuals of D<Omega, c> = -<Omega, total boundary of c> per target
    (q, i, j), sampled at random points and tangents.

    For a total cycle (and closed cocycle) the right side vanishes, so this
    also verifies that the pairing of a cycle is D-closed.
    """
    from .chains import total_differential

    G = omega.G
    coll = pair(omega, K, chain)
    rhs_coll = pair(omega, K, total_differential(K, chain))
    sign_rhs = -1
    targets = set()
    for (q, i, j) in coll.bidegrees():
        targets.add((q, i, j + 1))
        targets.add((q, i + 2, j - 1))
        if q >= 1:
            targets.add((q - 1, i, j))
    out = {}
    for (q, i, j) in sorted(targets):
        if j < 0 or (max_q is not None and q > max_q):
            continue
        pieces = []
        if j >= 1:
            pieces.append(h_exterior_derivative(G, coll.form(q, i, j - 1)))
        if i >= 2:
            pieces.append(h_delta_g(G, coll.form(q, i - 2, j + 1)))
        up = coll.form(q + 1, i, j)
        sc = sharp_coboundary(K, up)
        s = sharp_sign(i, j)
        pieces.append(PairedForm(q, i, j, lambda p, X, vs, _f=sc, _s=s: _s * _f(p, X, vs)))
        rhs = rhs_coll.form(q, i, j)
        worst = 0.0
        for _ in range(samples):
            p = random_rep_point(K, G, q, rng)
            X = G.random_algebra(rng) if i else None
            vs = [random_rep_tangent(K, G, q, rng) for _ in range(j)]
            lhs_val = sum(f(p, X, vs) for f in pieces)
            rhs_val = sign_rhs * rhs(p, X, vs)
            worst = max(worst, abs(lhs_val - rhs_val))
        out[(q, i, j)] = worst
    return out


# ---------------------------------------------------------------------------
# plots and fiber integration
# ---------------------------------------------------------------------------

@dataclass
class Plot:
    """A smooth family probing the representation spaces.

    ``maps[q]`` is a callable (params: ndarray, t: barycentric ndarray of
    length q+1) -> RepPoint of degree q; required for every q carrying a
    nonzero paired form.  ``dim`` is the parameter-domain dimension.
    """

    K: FreeSimplicialGroup
    G: MatrixGroup
    dim: int
    maps: Dict[int, Callable]
    equivariant: bool = True
    label: str = ""

    def point(self, q: int, params: np.ndarray, t: np.ndarray) -> RepPoint:
        try:
            f = self.maps[q]
        except KeyError:
            raise ValueError("plot provides no degree-%d family" % q) from None
        return f(np.asarray(params, dtype=float), np.asarray(t, dtype=float))

    def tangent(self, q: int, params: np.ndarray, t: np.ndarray,
                dparams: Optional[np.ndarray], dt: Optional[np.ndarray],
                step: float = FD_STEP) -> Dict[str, np.ndarray]:
        """Left-translated pushforward of a domain tangent, by central FD."""
        params = np.asarray(params, dtype=float)
        t = np.asarray(t, dtype=float)
        dp = np.zeros_like(params) if dparams is None else np.asarray(dparams, float)
        dtv = np.zeros_like(t) if dt is None else np.asarray(dt, float)

        base = self.point(q, params, t)
        out = {}
        for name, val in base.values.items():
            inv = np.linalg.inv(val)

            def f(s, _name=name):
                moved = self.point(q, params + s * dp, t + s * dtv)
                return moved.values[_name]

            d1 = (f(step) - f(-step)) / (2 * step)
            d2 = (f(step / 2) - f(-step / 2)) / step
            out[name] = inv @ ((4 * d2 - d1) / 3)
        return out


# Orientation sign of the fiber integration over Delta_q relative to the
# listed leg order (simplex legs first); fixed empirically by the momentum
# identity on the surface moduli space.
def plot_orientation(q: int) -> int:
    return 1


def integrate_over_plot(coll: PairedCollection, plot: Plot, i: int, m: int,
                        order: int = 4) -> Callable:
    """The m-form on the plot domain obtained from the equivariant-degree-i
    layer: per degree q, pull the (i, m+q) paired form back along the plot
    and integrate the simplex directions; sum over q.

    Returns evaluator(params, X, list of m parameter-tangent vectors).
    """
    from .liegroup.quadrature import simplex_rule

    pieces = []
    for (q, ii, j) in coll.bidegrees():
        if ii == i and j == m + q:
            pieces.append((q, coll.form(q, ii, j)))

    def evaluator(params, X, wtangents):
        total = 0.0 + 0.0j
        for q, form in pieces:
            pts, wts = simplex_rule(q, order)
            sign = plot_orientation(q)
            for t, w in zip(pts, wts):
                p = plot.point(q, params, t)
                legs = []
                for mm in range(1, q + 1):
                    dt = np.zeros(q + 1)
                    dt[0] = -1.0
                    dt[mm] = 1.0
                    legs.append(plot.tangent(q, params, t, None, dt))
                for v in wtangents:
                    legs.append(plot.tangent(q, params, t, v, None))
                total += sign * w * form(p, X, legs)
        return total

    return evaluator


def w_exterior_derivative(evaluator: Callable, step: float = FD_STEP) -> Callable:
    """d of a form on a flat parameter domain, by coordinate central FD."""

    def devaluator(params, X, wtangents):
        params = np.asarray(params, dtype=float)
        total = 0.0 + 0.0j
        for s in range(len(wtangents)):
            rest = [wtangents[m] for m in range(len(wtangents)) if m != s]
            v = np.asarray(wtangents[s], dtype=float)

            def f(h):
                return evaluator(params + h * v, X, rest)

            total += (-1) ** s * _directional(f, step)
        return total

    return devaluator
