"""Invariant polynomials on matrix Lie algebras.

An :class:`InvariantPolynomial` of degree r is the symmetric multilinear
form obtained by polarizing a homogeneous Ad-invariant polynomial P:

    Q(X_1, ..., X_r) = (1/r!) sum_{S subset [r], S nonempty}
                       (-1)^{r-|S|} P(sum_{i in S} X_i).

Provided polynomials: the normalized trace form Q(X, Y) = -tr(XY)/(8 pi^2)
(scale chosen so that the associated circle-valued invariants have integral
periods) and the coefficient polynomials of det(lambda I + (i/2 pi) X).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial
from typing import Callable, Sequence

import numpy as np


@dataclass
class InvariantPolynomial:
    """Symmetric multilinear Ad-invariant form of a fixed degree."""

    degree: int
    homogeneous: Callable[[np.ndarray], complex]
    label: str = ""

    def __call__(self, *args: np.ndarray) -> complex:
        if len(args) != self.degree:
            raise ValueError("expected %d arguments, got %d" % (self.degree, len(args)))
        r = self.degree
        total = 0.0 + 0.0j
        idx = range(r)
        for size in range(1, r + 1):
            sign = (-1) ** (r - size)
            for S in combinations(idx, size):
                acc = np.zeros_like(args[0])
                for i in S:
                    acc = acc + args[i]
                total += sign * self.homogeneous(acc)
        return total / factorial(r)

    def on_single(self, X: np.ndarray) -> complex:
        return self.homogeneous(X)


def trace_form(normalization: str = "basic") -> InvariantPolynomial:
    """Degree-2 form proportional to -tr(XY).

    "basic": -tr(XY)/(8 pi^2); "raw": -tr(XY).
    """
    if normalization == "basic":
        scale = 1.0 / (8 * np.pi ** 2)
    elif normalization == "raw":
        scale = 1.0
    else:
        raise ValueError("unknown normalization %r" % (normalization,))
    return InvariantPolynomial(
        2, lambda X: -scale * np.trace(X @ X), "trace_form[%s]" % normalization)


def chern_polynomial(r: int, n: int) -> InvariantPolynomial:
    """The r-th coefficient polynomial of det(lambda I + (i/2 pi) X) on u(n)."""
    if not (1 <= r <= n):
        raise ValueError("chern degree must satisfy 1 <= r <= n")

    def P(X: np.ndarray) -> complex:
        A = (1j / (2 * np.pi)) * X
        # det(lambda I + A) = charpoly of -A; numpy returns monic coefficients
        coeffs = np.poly(-A)
        return coeffs[r]

    return InvariantPolynomial(r, P, "c_%d" % r)


def polynomial_from_json(data: dict, n: int) -> InvariantPolynomial:
    """Descriptor {"kind":"trace_form","normalization":...} or {"kind":"chern","r":k}."""
    kind = data.get("kind")
    if kind == "trace_form":
        return trace_form(data.get("normalization", "basic"))
    if kind == "chern":
        return chern_polynomial(int(data["r"]), n)
    raise ValueError("unknown polynomial kind %r" % (kind,))


def invariance_residual(Q: InvariantPolynomial, G, rng: np.random.Generator,
                        samples: int = 5) -> float:
    """Max |Q(Ad_g X_i) - Q(X_i)| over random samples."""
    worst = 0.0
    for _ in range(samples):
        g = G.random_element(rng)
        Xs = [G.random_algebra(rng) for _ in range(Q.degree)]
        lhs = Q(*[G.adjoint(g, X) for X in Xs])
        rhs = Q(*Xs)
        worst = max(worst, abs(lhs - rhs))
    return worst
