"""Quadrature on the standard simplex Delta_q.

Points are returned in barycentric coordinates (t_0, ..., t_q); weights
integrate against the Lebesgue measure of the coordinate simplex
{(t_1, ..., t_q) : t_i >= 0, sum <= 1} (total mass 1/q!).

The rules are collapsed (Duffy) tensor products of Gauss-Legendre rules, so
a rule of 1D order m is exact for all polynomials in t of total degree
2m - 1 - (q - 1) at worst; the integrands in this package are polynomial in
t, and exactness is asserted by refinement in the tests.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np


def simplex_rule(q: int, order: int = 8) -> Tuple[np.ndarray, np.ndarray]:
    """(points, weights): points shape (N, q+1) barycentric, weights shape (N,)."""
    if q == 0:
        return np.array([[1.0]]), np.array([1.0])
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    # Duffy map from [0,1]^q: u -> t with t_m = u_m * prod_{l<m}(1-u_l)
    grids = np.meshgrid(*([x] * q), indexing="ij")
    weights = np.ones_like(grids[0])
    for wm in np.meshgrid(*([w] * q), indexing="ij"):
        weights = weights * wm
    us = [g.reshape(-1) for g in grids]
    weights = weights.reshape(-1)
    ts = []
    running = np.ones_like(us[0])
    jac = np.ones_like(us[0])
    for m in range(q):
        tm = us[m] * running
        ts.append(tm)
        if m < q - 1:
            jac = jac * (running - tm)  # d t_{m+1..} shrink factor
        running = running - tm
    t0 = running
    pts = np.stack([t0] + ts, axis=1)
    return pts, weights * jac


def integrate(q: int, f, order: int = 8) -> complex:
    """Integrate f(t barycentric) over Delta_q."""
    pts, wts = simplex_rule(q, order)
    return sum(w * f(t) for t, w in zip(pts, wts))
