"""Simplicial Chern-Weil forms on the nerve of a compact matrix group.

On G^k x Delta_k carry the simplicial connection theta = sum_i t_i beta_i,
where beta_i is the Maurer-Cartan form pulled back along the i-th suffix
product phi_i(g) = g_{i+1} ... g_k.  Its curvature F and moment mu are
evaluated in closed form; applying an invariant polynomial Q of degree r to
(mu + F) and integrating the dt-degree-k part over the simplex yields the
equivariant form components Q^{2a, j, k} with j = 2(r - a) - k.

Tangent vectors to G^k are lists of k Lie algebra elements (left-translated
convention).  Mixed tangents to G^k x Delta_k are ProductTangent objects
carrying an optional G-part and an optional dt-part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import comb, factorial
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .groups import MatrixGroup
from .polynomials import InvariantPolynomial
from .quadrature import simplex_rule

# Sign of the moment term; fixed empirically by requiring d_G-closedness of
# the assembled cocycle (see the equivariant ladder tests).
MOMENT_SIGN = -1.0

# Sign convention linking the nerve coboundary into the total differential:
# d_G = d + delta_G + nat_sign(i, j, k) * delta_natural on an (i, j)-form
# over G^k.  With the total grading i + j + k the measured sign is
# (-1)^{i+j+k}, which is +1 on every component of a degree-2r cocycle.
def nat_sign(i: int, j: int, k: int) -> int:
    return (-1) ** (i + j + k)


@dataclass
class ProductTangent:
    """Tangent vector to G^k x Delta_k: algebra parts plus a dt vector."""

    g_part: Optional[List[np.ndarray]] = None  # k algebra elements, or None
    dt_part: Optional[np.ndarray] = None       # length k+1, entries sum to 0


def simplex_edge(k: int, m: int) -> ProductTangent:
    """The tangent e_m - e_0 of Delta_k (m = 1..k)."""
    dt = np.zeros(k + 1)
    dt[0] = -1.0
    dt[m] = 1.0
    return ProductTangent(dt_part=dt)


def g_tangent(vs: List[np.ndarray]) -> ProductTangent:
    return ProductTangent(g_part=list(vs))


def suffix_products(gs: Sequence[np.ndarray], n: int) -> List[np.ndarray]:
    """phi_i = g_{i+1} ... g_k for i = 0..k (phi_k = identity)."""
    k = len(gs)
    out = [np.eye(n, dtype=complex)]
    for m in range(k - 1, -1, -1):
        out.append(gs[m] @ out[-1])
    return out[::-1]


class ConnectionData:
    """Cached per-point data for evaluating beta_i, F, and mu."""

    def __init__(self, G: MatrixGroup, gs: Sequence[np.ndarray]):
        self.G = G
        self.gs = list(gs)
        self.k = len(gs)
        self.phi = suffix_products(gs, G.n)
        self.phi_inv = [np.linalg.inv(p) for p in self.phi]

    def betas(self, v: ProductTangent) -> List[np.ndarray]:
        """beta_i(v) for i = 0..k (g-valued; zero on simplex directions)."""
        k, n = self.k, self.G.n
        zero = np.zeros((n, n), dtype=complex)
        if v.g_part is None:
            return [zero] * (k + 1)
        # beta_i(v) = sum_{m > i} Ad(phi_m^{-1}) a_m  for left tangents a_m
        out = [zero] * (k + 1)
        acc = zero
        for i in range(k - 1, -1, -1):
            m = i + 1
            acc = acc + self.phi_inv[m] @ v.g_part[m - 1] @ self.phi[m]
            out[i] = acc
        return out

    def theta(self, t: np.ndarray, v: ProductTangent,
              betas: Optional[List[np.ndarray]] = None) -> np.ndarray:
        b = betas if betas is not None else self.betas(v)
        out = np.zeros((self.G.n, self.G.n), dtype=complex)
        for i in range(self.k + 1):
            if t[i]:
                out = out + t[i] * b[i]
        return out

    def curvature(self, t: np.ndarray, u: ProductTangent, v: ProductTangent,
                  bu=None, bv=None) -> np.ndarray:
        """F(u, v) = F^{1,1} + F^{0,2} at barycentric point t."""
        bu = self.betas(u) if bu is None else bu
        bv = self.betas(v) if bv is None else bv
        n = self.G.n
        out = np.zeros((n, n), dtype=complex)
        du = u.dt_part
        dv = v.dt_part
        for i in range(self.k + 1):
            if du is not None and du[i]:
                out = out + du[i] * bv[i]
            if dv is not None and dv[i]:
                out = out - dv[i] * bu[i]
        tu = self.theta(t, u, bu)
        tv = self.theta(t, v, bv)
        out = out + (tu @ tv - tv @ tu)
        for i in range(self.k + 1):
            if t[i]:
                out = out - t[i] * (bu[i] @ bv[i] - bv[i] @ bu[i])
        return out

    def moment(self, t: np.ndarray, X: np.ndarray) -> np.ndarray:
        """mu(X) = sign * sum_i t_i Ad(phi_i^{-1}) X."""
        out = np.zeros((self.G.n, self.G.n), dtype=complex)
        for i in range(self.k + 1):
            if t[i]:
                out = out + t[i] * (self.phi_inv[i] @ X @ self.phi[i])
        return MOMENT_SIGN * out


def _alternating_value(Q: InvariantPolynomial, a: int, mus: np.ndarray,
                       F_of: Callable[[int, int], np.ndarray], nlegs: int) -> complex:
    """(1/2^f) sum_{perm} sgn * Q(mu^a, F(pairs)) with f = (degree - a)."""
    f = Q.degree - a
    if 2 * f != nlegs:
        return 0.0
    total = 0.0 + 0.0j
    for perm, sgn in _signed_permutations(nlegs):
        args = [mus] * a
        ok = True
        for p in range(f):
            args.append(F_of(perm[2 * p], perm[2 * p + 1]))
        total += sgn * Q(*args)
    return total / (2.0 ** f)


_SIGNED_PERMS = {}


def _signed_permutations(n: int):
    if n not in _SIGNED_PERMS:
        _SIGNED_PERMS[n] = [(p, _perm_sign(p)) for p in permutations(range(n))]
    return _SIGNED_PERMS[n]


def _perm_sign(perm: Tuple[int, ...]) -> int:
    sgn = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


@dataclass
class EquivariantForm:
    """A component form on G^k: equivariant degree i (even), form degree j.

    The evaluator receives (list of k group elements, Lie algebra argument X
    or None when i = 0, list of j tangent vectors each a list of k algebra
    elements) and returns a complex number.
    """

    k: int
    i: int
    j: int
    evaluator: Callable
    label: str = ""

    def __call__(self, gs: Sequence[np.ndarray], X: Optional[np.ndarray],
                 tangents: Sequence[List[np.ndarray]]) -> complex:
        if len(tangents) != self.j:
            raise ValueError("form of degree %d got %d tangents" % (self.j, len(tangents)))
        return self.evaluator(gs, X, tangents)


def omega_component(G: MatrixGroup, Q: InvariantPolynomial, a: int, k: int,
                    order: int = 4) -> EquivariantForm:
    """The component Q^{2a, j, k} with j = 2(Q.degree - a) - k.

    Integrates the Q((mu + F)^r) layer with a moment slots over Delta_k.
    """
    r = Q.degree
    j = 2 * (r - a) - k
    if j < 0:
        raise ValueError("no component: j = %d < 0" % j)
    pts, wts = simplex_rule(k, order)
    multiplicity = comb(r, a)

    def evaluator(gs, X, tangents):
        data = ConnectionData(G, gs)
        legs = [simplex_edge(k, m) for m in range(1, k + 1)]
        legs += [g_tangent(v) for v in tangents]
        betas = [data.betas(v) for v in legs]
        total = 0.0 + 0.0j
        for t, w in zip(pts, wts):
            mus = data.moment(t, X) if a else None
            cache = {}

            def F_of(p, s, _t=t, _cache=cache):
                if (s, p) in _cache:
                    return -_cache[(s, p)]
                key = (p, s)
                if key not in _cache:
                    _cache[key] = data.curvature(_t, legs[p], legs[s],
                                                 betas[p], betas[s])
                return _cache[key]

            total += w * _alternating_value(Q, a, mus, F_of, len(legs))
        return multiplicity * total

    return EquivariantForm(k, 2 * a, j, evaluator,
                           "Q^{%d,%d,%d}" % (2 * a, j, k))


def shulman_form(G: MatrixGroup, Q: InvariantPolynomial, q: int,
                 order: int = 4) -> EquivariantForm:
    """Q^{2r-q, q} on G^q: the moment-free (a = 0) layer."""
    if not (1 <= q <= Q.degree):
        raise ValueError("need 1 <= q <= %d" % Q.degree)
    return omega_component(G, Q, 0, q, order)


def equivariant_forms(G: MatrixGroup, Q: InvariantPolynomial, q: int,
                      order: int = 4) -> List[EquivariantForm]:
    """All components Q^{2a, j, q} on G^q with 2a + j + q = 2r, j >= 0."""
    if not (1 <= q <= Q.degree):
        raise ValueError("need 1 <= q <= %d" % Q.degree)
    out = []
    for a in range(0, Q.degree + 1):
        j = 2 * (Q.degree - a) - q
        if j >= 0:
            out.append(omega_component(G, Q, a, q, order))
    return out


class OmegaQ:
    """The assembled total-degree-2r equivariant cocycle: all components
    Q^{2a, j, k} for 1 <= k <= r, built lazily and cached."""

    def __init__(self, G: MatrixGroup, Q: InvariantPolynomial,
                 order: Optional[int] = None):
        self.G = G
        self.Q = Q
        # the simplex integrands are polynomial of degree at most 2r in the
        # barycentric coordinates, so Gauss order r + 1 integrates exactly
        self.order = order if order is not None else Q.degree + 1
        self._cache = {}

    @property
    def degree(self) -> int:
        return 2 * self.Q.degree

    def component(self, a: int, k: int) -> EquivariantForm:
        key = (a, k)
        if key not in self._cache:
            self._cache[key] = omega_component(self.G, self.Q, a, k, self.order)
        return self._cache[key]

    def components(self) -> List[EquivariantForm]:
        out = []
        for k in range(1, self.Q.degree + 1):
            for a in range(0, self.Q.degree + 1):
                if 2 * (self.Q.degree - a) - k >= 0:
                    out.append(self.component(a, k))
        return out


def assemble_omega(G: MatrixGroup, Q: InvariantPolynomial,
                   order: Optional[int] = None) -> OmegaQ:
    return OmegaQ(G, Q, order)


# ---------------------------------------------------------------------------
# differentials on nerve forms
# ---------------------------------------------------------------------------

FD_STEP = 1e-5


def closedness_residuals(omega: OmegaQ, rng: np.random.Generator,
                         samples: int = 10) -> dict:
    """Max residual of the d_G cocycle condition per target bidegree.

    For each target (i, j+1, k) with i = 2a the condition is
        d Q^{i,j,k} + delta_G Q^{i-2,j+2,k} + nat_sign * delta_nat Q^{i,j+1,k-1} = 0,
    sampled at random points and left-invariant tangent frames.
    """
    G, Q = omega.G, omega.Q
    r = Q.degree

    def exists(a, k):
        return 0 <= a <= r and 1 <= k <= r and 2 * (r - a) - k >= 0

    out = {}
    for a_t in range(0, r + 1):
        for k_t in range(1, r + 2):
            j_t = 2 * r + 1 - 2 * a_t - k_t
            if j_t < 0:
                continue
            terms = []
            if exists(a_t, k_t) and j_t >= 1:
                terms.append(exterior_derivative_fd(G, omega.component(a_t, k_t)))
            if a_t >= 1 and exists(a_t - 1, k_t):
                terms.append(cartan_delta_g(G, omega.component(a_t - 1, k_t)))
            if exists(a_t, k_t - 1):
                prev = omega.component(a_t, k_t - 1)
                sign = nat_sign(prev.i, prev.j, prev.k)
                dn = delta_natural(G, prev)
                terms.append(EquivariantForm(
                    k_t, 2 * a_t, j_t,
                    lambda gs, X, vs, _f=dn, _s=sign: _s * _f(gs, X, vs)))
            if not terms:
                continue
            worst = 0.0
            for _ in range(samples):
                gs = [G.random_element(rng) for _ in range(k_t)]
                X = G.random_algebra(rng) if a_t else None
                vs = [[G.random_algebra(rng) for _ in range(k_t)] for _ in range(j_t)]
                val = sum(t(gs, X, vs) for t in terms)
                worst = max(worst, abs(val))
            out[(2 * a_t, j_t, k_t)] = worst
    return out


def restriction_residual(omega: OmegaQ, rng: np.random.Generator,
                         samples: int = 5) -> float:
    """Max |Q^{0,j,k}(X arbitrary) - shulman_form value|: the moment-free
    layer must agree with the Shulman forms pointwise."""
    G, Q = omega.G, omega.Q
    worst = 0.0
    for k in range(1, Q.degree + 1):
        base = shulman_form(G, Q, k, omega.order)
        comp = omega.component(0, k)
        for _ in range(samples):
            gs = [G.random_element(rng) for _ in range(k)]
            vs = [[G.random_algebra(rng) for _ in range(k)] for _ in range(base.j)]
            worst = max(worst, abs(comp(gs, None, vs) - base(gs, None, vs)))
    return worst


def _directional(f: Callable[[float], complex], step: float = FD_STEP) -> complex:
    """Richardson-extrapolated central difference of f at 0."""
    d1 = (f(step) - f(-step)) / (2 * step)
    d2 = (f(step / 2) - f(-step / 2)) / step
    return (4 * d2 - d1) / 3


def exterior_derivative_fd(G: MatrixGroup, form: EquivariantForm) -> EquivariantForm:
    """d of a form on G^k, via the invariant formula in left-invariant frames:

    (j+1) dω(V_0..V_j) = sum (-1)^p V_p ω(.. V̂_p ..)
                       + sum_{p<s} (-1)^{p+s} ω([V_p,V_s], ..)
    with left-invariant extensions, so brackets are entrywise commutators.
    """
    k, j = form.k, form.j

    def evaluator(gs, X, tangents):
        total = 0.0 + 0.0j
        for p in range(j + 1):
            rest = [tangents[s] for s in range(j + 1) if s != p]

            def f(s, _p=p, _rest=rest):
                moved = [g @ G.exp(s * a) for g, a in zip(gs, tangents[_p])]
                return form(moved, X, _rest)

            total += (-1) ** p * _directional(f)
        for p in range(j + 1):
            for s in range(p + 1, j + 1):
                bracket = [ap @ as_ - as_ @ ap
                           for ap, as_ in zip(tangents[p], tangents[s])]
                rest = [tangents[m] for m in range(j + 1) if m not in (p, s)]
                total += (-1) ** (p + s) * form(gs, X, [bracket] + rest)
        return total

    return EquivariantForm(k, form.i, j + 1, evaluator, "d(%s)" % form.label)


def cartan_delta_g(G: MatrixGroup, form: EquivariantForm) -> EquivariantForm:
    """delta_G: contract with minus the conjugation fundamental field,
    raising the equivariant degree by 2."""
    if form.j < 1:
        raise ValueError("delta_G needs form degree >= 1")

    def evaluator(gs, X, tangents):
        # left-translated fundamental field of g -> exp(sX) g exp(-sX)
        xm = [np.linalg.inv(g) @ X @ g - X for g in gs]
        return -form(gs, X, [xm] + list(tangents))

    return EquivariantForm(form.k, form.i + 2, form.j - 1, evaluator,
                           "delta_G(%s)" % form.label)


def delta_natural(G: MatrixGroup, form: EquivariantForm) -> EquivariantForm:
    """The nerve coboundary: alternating sum of face pullbacks, G^k -> G^{k+1}."""
    k = form.k

    def face(p, gs, tangents):
        if p == 0:
            return gs[1:], [v[1:] for v in tangents]
        if p == k + 1:
            return gs[:-1], [v[:-1] for v in tangents]
        merged = gs[:p - 1] + [gs[p - 1] @ gs[p]] + gs[p + 1:]
        out_t = []
        for v in tangents:
            ginv = np.linalg.inv(gs[p])
            a = ginv @ v[p - 1] @ gs[p] + v[p]
            out_t.append(v[:p - 1] + [a] + v[p + 1:])
        return merged, out_t

    def evaluator(gs, X, tangents):
        gs = list(gs)
        tangents = [list(v) for v in tangents]
        total = 0.0 + 0.0j
        for p in range(k + 2):
            fg, ft = face(p, gs, tangents)
            total += (-1) ** p * form(fg, X, ft)
        return total

    return EquivariantForm(k + 1, form.i, form.j, evaluator,
                           "delta_nat(%s)" % form.label)
