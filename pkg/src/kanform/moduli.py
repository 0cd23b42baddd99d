"""Applications of the chain/form pairing.

* Extended moduli spaces of surface group representations: pairs (w, X)
  with exp(X) equal to the relator word evaluated at w, X in the regular
  locus of exp.  Charts come from Newton projection onto the constraint
  surface; the paired 2-form and momentum function live on these charts.
* The Kirillov form comparison on conjugation orbits inside the fiber
  exp^{-1}(e).
* The circle-valued function attached to a 3-complex: the closed 1-form
  psi integrated along paths of a plot, with integral periods.
* The U(n) generator catalog for surface representation varieties.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .chains import BarTuple, TotalChain, bar_differential, total_differential
from .cyclelift import surface_cycle, threefold_cycle
from .liegroup.groups import MatrixGroup
from .liegroup.polynomials import InvariantPolynomial, chern_polynomial, trace_form
from .liegroup.quadrature import simplex_rule
from .liegroup.shulman import OmegaQ, assemble_omega, omega_component
from .pairing import (PairedCollection, Plot, RepPoint, integrate_over_plot,
                      pair, w_exterior_derivative)
from .simplicial import FreeSimplicialGroup, builtin_surface
from .words import Word, gen_word


class ModuliError(ValueError):
    """Constraint-surface failures: bad seed, irregular X, no convergence."""


# ---------------------------------------------------------------------------
# extended moduli space
# ---------------------------------------------------------------------------

REGULARITY_MARGIN = 1e-3


def exp_regular(G: MatrixGroup, X: np.ndarray, margin: float = REGULARITY_MARGIN) -> bool:
    """X lies in the regular locus of exp: no ad_X eigenvalue in
    2 pi i Z minus 0 (within the margin)."""
    d = G.dim
    ad = np.zeros((d, d))
    for b, E in enumerate(G.basis):
        ad[:, b] = G.algebra_coords(X @ E - E @ X)
    for ev in np.linalg.eigvals(ad):
        k = round(ev.imag / (2 * np.pi))
        if k != 0 and abs(ev - 2j * np.pi * k) < 2 * np.pi * margin and abs(ev) > 1e-9:
            return False
    return True


@dataclass
class ModuliPoint:
    ws: List[np.ndarray]
    X: np.ndarray


class ExtendedModuli:
    """{(w, X) in G^m x O : exp(X) = relator(w)} with Newton-chart machinery.

    ``relator`` is a word in the degree-0 generators; ``gen_names`` orders
    the w-coordinates.
    """

    def __init__(self, G: MatrixGroup, gen_names: Sequence[str], relator: Word,
                 label: str = ""):
        self.G = G
        self.gen_names = list(gen_names)
        self.relator = relator
        self.label = label
        self.m = len(self.gen_names)

    # ambient coordinates around a base point: m + 1 blocks of G.dim reals
    @property
    def ambient_dim(self) -> int:
        return (self.m + 1) * self.G.dim

    def relator_value(self, ws: Sequence[np.ndarray]) -> np.ndarray:
        p = RepPoint(0, dict(zip(self.gen_names, ws)))
        if self.relator.is_identity:
            return self.G.identity().astype(complex)
        return p.word_value(self.relator)

    def constraint(self, p: ModuliPoint) -> np.ndarray:
        diff = self.G.exp(p.X) - self.relator_value(p.ws)
        return np.concatenate([diff.real.ravel(), diff.imag.ravel()])

    def residual(self, p: ModuliPoint) -> float:
        return float(np.linalg.norm(self.G.exp(p.X) - self.relator_value(p.ws)))

    def shift(self, p: ModuliPoint, z: np.ndarray) -> ModuliPoint:
        d = self.G.dim
        ws = [w @ self.G.exp(self.G.algebra_element(z[i * d:(i + 1) * d]))
              for i, w in enumerate(p.ws)]
        X = p.X + self.G.algebra_element(z[self.m * d:])
        return ModuliPoint(ws, X)

    def jacobian(self, p: ModuliPoint, step: float = 1e-6) -> np.ndarray:
        cols = []
        for a in range(self.ambient_dim):
            z = np.zeros(self.ambient_dim)
            z[a] = step
            cp = self.constraint(self.shift(p, z))
            cm = self.constraint(self.shift(p, -z))
            cols.append((cp - cm) / (2 * step))
        return np.stack(cols, axis=1)

    def project(self, p: ModuliPoint, tol: float = 1e-11,
                max_iter: int = 50) -> ModuliPoint:
        """Newton projection onto the constraint surface.

        Iterates to the numerical floor rather than stopping at the first
        tolerance hit: a data-dependent iteration count would make the
        projected point jump by the size of the final Newton step when the
        count changes, which shows up as noise in chart derivatives.
        """
        c = self.constraint(p)
        r = np.linalg.norm(c)
        for _ in range(max_iter):
            if r <= 1e-14:
                return p
            J = self.jacobian(p)
            q = self.shift(p, -np.linalg.pinv(J, rcond=1e-6) @ c)
            c2 = self.constraint(q)
            r2 = np.linalg.norm(c2)
            if r2 >= r:
                break
            p, c, r = q, c2, r2
        if r <= tol:
            return p
        raise ModuliError("Newton projection did not converge (residual %.2e)"
                          % r)

    def tangent_basis(self, p: ModuliPoint) -> np.ndarray:
        """Orthonormal basis of ker(constraint Jacobian), columns."""
        J = self.jacobian(p)
        _, s, vt = np.linalg.svd(J)
        rank = int(np.sum(s > 1e-7 * max(1.0, s[0])))
        return vt[rank:].T

    def random_point(self, rng: np.random.Generator, scale: float = 0.8,
                     attempts: int = 40) -> ModuliPoint:
        """A generic constraint point: random w, X = log of the relator value."""
        for _ in range(attempts):
            ws = [self.G.random_element(rng, scale) for _ in range(self.m)]
            try:
                X = self.G.log(self.relator_value(ws))
            except Exception:
                continue
            p = ModuliPoint(ws, X)
            if self.residual(p) <= 1e-9 and exp_regular(self.G, X):
                return p
        raise ModuliError("no regular seed found")

    def chart(self, p: ModuliPoint) -> Tuple[Callable, np.ndarray]:
        """(chart map u -> ModuliPoint, tangent basis at p).

        The chart is a Gauss-Newton projection of p shifted along the tangent
        basis; its differential at u = 0 is the basis itself.  The
        pseudo-inverse of the constraint Jacobian is frozen at the seed, so
        the chart map is a composition of fixed smooth maps: a per-point
        finite-difference Jacobian would inject noise at the scale of its
        own truncation error, which chart derivatives then amplify.
        """
        B = self.tangent_basis(p)
        P0 = np.linalg.pinv(self.jacobian(p), rcond=1e-6)
        cache: Dict[bytes, ModuliPoint] = {}

        def chart_map(u: np.ndarray) -> ModuliPoint:
            u = np.asarray(u, dtype=float)
            key = u.tobytes()
            if key not in cache:
                q = self.shift(p, B @ u)
                r = np.linalg.norm(self.constraint(q))
                for _ in range(200):
                    if r <= 1e-14:
                        break
                    q2 = self.shift(q, -P0 @ self.constraint(q))
                    r2 = np.linalg.norm(self.constraint(q2))
                    if r2 >= r:
                        break
                    q, r = q2, r2
                if r > 1e-10:
                    raise ModuliError("chart projection did not converge "
                                      "(residual %.2e); point outside the "
                                      "chart's basin" % r)
                cache[key] = q
                if len(cache) > 4096:
                    cache.clear()
            return cache[key]

        return chart_map, B

    def fundamental_chart_vector(self, p: ModuliPoint, B: np.ndarray,
                                 Z: np.ndarray) -> np.ndarray:
        """Chart coordinates of the conjugation fundamental field at p."""
        d = self.G.dim
        vec = np.zeros(self.ambient_dim)
        for i, w in enumerate(p.ws):
            a = np.linalg.inv(w) @ Z @ w - Z
            vec[i * d:(i + 1) * d] = self.G.algebra_coords(a)
        vec[self.m * d:] = self.G.algebra_coords(Z @ p.X - p.X @ Z)
        return B.T @ vec


def surface_moduli(G: MatrixGroup, genus: int) -> Tuple[ExtendedModuli, FreeSimplicialGroup]:
    K = builtin_surface(genus)
    names = [g.name for g in K.base_generators(0)]
    relator = K.face_of_generator(1, next(g for g in K.base_generators(1)), 0)
    return ExtendedModuli(G, names, relator, label="genus %d" % genus), K


# ---------------------------------------------------------------------------
# plots over moduli charts
# ---------------------------------------------------------------------------

def moduli_plot(M: ExtendedModuli, K: FreeSimplicialGroup,
                chart_map: Callable, dim: int) -> Plot:
    """The canonical plot over a moduli chart: degree 0 sends the w-values,
    degree 1 sends the relator generator along t -> exp(t_0 X) and every
    degeneracy of a degree-0 generator to that generator's value."""

    def point_values(q: int, p: ModuliPoint, t: np.ndarray) -> RepPoint:
        vals: Dict[str, np.ndarray] = {}
        base = dict(zip(M.gen_names, p.ws))
        for g in K.alphabet(q):
            ops, root = _strip_ops(g.name)
            if root in base:
                vals[g.name] = base[root]
            else:
                # relator generator: edge path from the identity (vertex 0)
                # to exp(X) (vertex 1), degeneracies collapse coordinates
                tc = np.asarray(t, dtype=float)
                for op in ops:
                    tc = _collapse(tc, op)
                vals[g.name] = M.G.exp(float(tc[1]) * p.X)
        return RepPoint(q, vals)

    def make_map(q):
        def f(params, t):
            return point_values(q, chart_map(params), t)
        return f

    return Plot(K=K, G=M.G, dim=dim, maps={q: make_map(q) for q in (0, 1, 2)},
                equivariant=True, label="moduli chart plot")


def _strip_ops(name: str):
    from .simplicial import parse_ops
    return parse_ops(name)


def _collapse(t: np.ndarray, j: int) -> np.ndarray:
    """Barycentric image under the collapse opposite to degeneracy s_j."""
    out = list(t[:j]) + [t[j] + t[j + 1]] + list(t[j + 2:])
    return np.asarray(out, dtype=float)


# ---------------------------------------------------------------------------
# the surface 2-form and momentum map
# ---------------------------------------------------------------------------

@dataclass
class SurfaceFormData:
    """Evaluators for the paired 2-form and momentum function on a chart."""

    omega_c: Callable   # (u, wtangents[2]) -> real
    mu_sharp: Callable  # (u, X) -> real
    plot: Plot
    chart_map: Callable
    basis: np.ndarray
    M: ExtendedModuli
    collection: PairedCollection


def surface_two_form(M: ExtendedModuli, K: FreeSimplicialGroup,
                     omega: OmegaQ, chain: TotalChain,
                     seed_point: ModuliPoint) -> SurfaceFormData:
    chart_map, B = M.chart(seed_point)
    plot = moduli_plot(M, K, chart_map, B.shape[1])
    coll = pair(omega, K, chain)
    two_form = integrate_over_plot(coll, plot, i=0, m=2)
    mu_form = integrate_over_plot(coll, plot, i=2, m=0)

    def omega_c(u, vs):
        return float(np.real(two_form(u, None, vs)))

    def mu_sharp(u, X):
        return float(np.real(mu_form(u, X, [])))

    return SurfaceFormData(omega_c, mu_sharp, plot, chart_map, B, M, coll)


def momentum_identity_residual(data: SurfaceFormData, u: np.ndarray,
                               Z: np.ndarray, v: np.ndarray) -> float:
    """| delta_G omega_c - d mu_sharp | at chart point u, algebra argument Z,
    chart tangent v: compares the contraction omega_c(Z_W, v) with the
    derivative of mu_sharp(., Z) along v."""
    p = data.chart_map(u)
    zw = data.M.fundamental_chart_vector(p, data.basis, Z)
    lhs = data.omega_c(u, [zw, v])

    dmu = w_exterior_derivative(lambda uu, X, vs: data.mu_sharp(uu, X))
    rhs = float(np.real(dmu(u, Z, [v])))
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Kirillov orbit comparison
# ---------------------------------------------------------------------------

def kirillov_check(G: MatrixGroup, X0: np.ndarray, Q: InvariantPolynomial,
                   rng: np.random.Generator, samples: int = 20,
                   order: int = 24) -> dict:
    """Compare the paired 2-form on the exp-fiber orbit of X0 with the
    Kirillov--Kostant--Souriau form Q(X, [a, b]).

    Uses the one-relator complex with trivial relator: the cycle is the
    single relator tuple, and the plot sends it along t -> exp(t_0 Ad_g X0).
    """
    if np.linalg.norm(G.exp(X0) - G.identity()) > 1e-9:
        raise ModuliError("X0 must satisfy exp(X0) = identity")
    K = builtin_surface(0)
    chain, _ = surface_cycle(K)
    omega = assemble_omega(G, Q, order=order)
    coll = pair(omega, K, chain)

    d = G.dim

    def orbit_X(params):
        g = G.exp(G.algebra_element(params))
        return g @ X0 @ np.linalg.inv(g)

    def f1(params, t):
        return RepPoint(1, {"r": G.exp(float(t[1]) * orbit_X(params))})

    plot = Plot(K=K, G=G, dim=d,
                maps={0: lambda params, t: RepPoint(0, {}),
                      1: f1, 2: lambda params, t: RepPoint(2, {})},
                label="orbit plot")
    form = integrate_over_plot(coll, plot, i=0, m=2)

    ratios = []
    if np.linalg.norm(X0) < 1e-12:
        return {"ratios": [], "mean": 0.0, "spread": 0.0, "orbit_trivial": True}
    center = np.zeros(d)
    X = orbit_X(center)
    for _ in range(samples):
        a = G.random_algebra(rng)
        b = G.random_algebra(rng)
        kks = Q(X, a @ b - b @ a)
        if abs(kks) < 1e-6:
            continue
        val = np.real(form(center, None, [_orbit_chart(G, X0, a),
                                          _orbit_chart(G, X0, b)]))
        ratios.append((val / kks).real)
    ratios = np.array(ratios)
    mean = float(np.mean(ratios))
    spread = float(np.std(ratios) / abs(mean)) if abs(mean) > 0 else float("inf")
    return {"ratios": ratios.tolist(), "mean": mean, "spread": spread,
            "orbit_trivial": False}


def _orbit_chart(G: MatrixGroup, X0: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Chart tangent of the orbit parametrization params -> Ad_exp(params) X0
    at 0 pushing the algebra element a: just the coordinates of a."""
    return G.algebra_coords(a)


# ---------------------------------------------------------------------------
# circle-valued function of a 3-complex
# ---------------------------------------------------------------------------

@dataclass
class CircleValue:
    """A real number modulo 1."""

    raw: float

    @property
    def value(self) -> float:
        return self.raw % 1.0


def alpha_form(omega: OmegaQ, K: FreeSimplicialGroup, chain: TotalChain):
    """The 2-form alpha = <Q^{0,2,2}, c_{2,1}> on H_1 together with the
    3-form it must bound: d alpha = -<lambda, bar boundary of c_{2,1}>,
    the pullback of the Cartan 3-form along the attached word maps."""
    coll = pair(omega, K, chain.component(2, 1))
    target_chain = bar_differential(chain.component(2, 1)).scale(-1)
    target = pair(omega, K, target_chain)
    return coll.form(1, 0, 2), target.form(1, 0, 3)


def psi_one_form(omega: OmegaQ, K: FreeSimplicialGroup, chain: TotalChain,
                 plot: Plot, order: int = 12) -> Callable:
    """The closed 1-form psi on the plot domain: the degree-(0, 1) layer of
    the integrated pairing (the simplex integral of the Cartan-form pullback
    plus the alpha correction)."""
    coll = pair(omega, K, chain)
    return integrate_over_plot(coll, plot, i=0, m=1, order=order)


def chern_simons(omega: OmegaQ, K: FreeSimplicialGroup, chain: TotalChain,
                 plot: Plot, path: Callable, n_steps: int = 48,
                 order: int = 12, psi: Optional[Callable] = None) -> Tuple[CircleValue, dict]:
    """Integrate psi along a path s in [0, 1] -> plot domain.

    Returns the circle value of the integral and a report with the raw real
    integral and its distance to the nearest integer (meaningful for loops).
    """
    if psi is None:
        psi = psi_one_form(omega, K, chain, plot, order=order)
    nodes, weights = np.polynomial.legendre.leggauss(n_steps)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    h = 1e-5
    total = 0.0
    for s, w in zip(nodes, weights):
        u = np.asarray(path(s), dtype=float)
        du = (np.asarray(path(min(s + h, 1.0)), dtype=float)
              - np.asarray(path(max(s - h, 0.0)), dtype=float)) / (
                  min(s + h, 1.0) - max(s - h, 0.0))
        total += w * float(np.real(psi(u, None, [du])))
    report = {"raw": total, "nearest_integer": round(total),
              "integer_distance": abs(total - round(total))}
    return CircleValue(total), report


def minimal_sweep_plot(G: MatrixGroup):
    """The degree-1 sweep family over W = T^3 for the minimal 3-complex on
    SU(2): parameter s1 runs through a loop of maps of the 2-simplex that
    sweeps out the group once, s2 and s3 conjugate by commuting circles.

    Returns (K, cycle, plot, loop) where loop(s) is the degree-1 loop in W.
    """
    from .simplicial import minimal_threefold

    K = minimal_threefold()
    chain, _ = threefold_cycle(K)

    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    base_dir = 1j * np.pi * sz  # north pole, the value on the boundary

    def unit_dir(t):
        # rational degree-1 map of the 2-simplex to the sphere collapsing
        # the boundary to the north pole: inverse stereographic projection
        # of (t1 - 1/3, t2 - 1/3) / (5 t0 t1 t2); analytic on the closed
        # simplex since the denominator |w|^2 + eps^2 never vanishes
        w1 = t[1] - 1.0 / 3.0
        w2 = t[2] - 1.0 / 3.0
        eps = 4.0 * t[0] * t[1] * t[2]
        den = w1 * w1 + w2 * w2 + eps * eps
        n = np.array([2 * w1 * eps, 2 * w2 * eps,
                      w1 * w1 + w2 * w2 - eps * eps]) / den
        return 1j * np.pi * (n[0] * sx + n[1] * sy + n[2] * sz)

    def sweep(s1, t):
        A = unit_dir(t)
        return G.exp(s1 * A) @ np.linalg.inv(G.exp(s1 * base_dir))

    def conj(s2, s3):
        return G.exp(2 * np.pi * s2 * 1j * sz) @ G.exp(2 * np.pi * s3 * 1j * sx)

    def f2(params, t):
        s1, s2, s3 = params
        C = conj(s2, s3)
        return RepPoint(2, {"sigma": C @ sweep(s1, t) @ np.linalg.inv(C)})

    plot = Plot(K=K, G=G, dim=3,
                maps={0: lambda params, t: RepPoint(0, {}),
                      1: lambda params, t: RepPoint(1, {}),
                      2: f2},
                label="minimal sweep")

    def loop(s):
        return np.array([s, 0.13, 0.29])

    return K, chain, plot, loop


# ---------------------------------------------------------------------------
# U(n) generator catalog
# ---------------------------------------------------------------------------

def un_generator_catalog(genus: int, n: int) -> List[dict]:
    """Descriptors of the generating classes for U(n) surface representation
    varieties: f_r of degree 2r-2 (cycle pairings), b_r^j of degree 2r-1
    (1-cell pairings), a_r of degree 2r (the polynomials themselves)."""
    from .liegroup.groups import unitary

    G = unitary(n)
    K = builtin_surface(genus)
    chain, _ = surface_cycle(K)
    out = []
    for r in range(1, n + 1):
        Q = chern_polynomial(r, n)
        omega = assemble_omega(G, Q)
        coll = pair(omega, K, chain)
        out.append({"name": "f_%d" % r, "degree": 2 * r - 2, "kind": "cycle_pairing",
                    "group": G.label, "polynomial": Q.label,
                    "collection": coll, "omega": omega, "K": K, "chain": chain})
        for j, gen in enumerate(K.base_generators(0)):
            cell_chain = TotalChain()
            cell_chain.add(BarTuple(0, (gen_word(gen),)), 1)
            bcoll = pair(omega, K, cell_chain)
            out.append({"name": "b_%d^%d" % (r, j + 1), "degree": 2 * r - 1,
                        "kind": "cell_pairing", "group": G.label,
                        "polynomial": Q.label, "collection": bcoll,
                        "omega": omega, "K": K, "chain": cell_chain})
        out.append({"name": "a_%d" % r, "degree": 2 * r, "kind": "polynomial",
                    "group": G.label, "polynomial": Q.label, "Q": Q})
    return out
