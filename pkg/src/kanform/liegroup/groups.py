"""Compact matrix groups U(n), SU(n), SO(n) with explicit Lie algebra bases.

Group elements are numpy matrices; tangent vectors at g are stored
left-translated, i.e. as Lie algebra elements a with the tangent being g a.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.linalg import expm, logm


@dataclass
class MatrixGroup:
    """A compact matrix group with a fixed orthogonal-ish algebra basis."""

    family: str
    n: int
    basis: List[np.ndarray]
    complex_entries: bool = True
    label: str = ""

    @property
    def dim(self) -> int:
        return len(self.basis)

    def identity(self) -> np.ndarray:
        dtype = complex if self.complex_entries else float
        return np.eye(self.n, dtype=dtype)

    def exp(self, a: np.ndarray) -> np.ndarray:
        # skew-Hermitian arguments admit a fast unitary eigendecomposition;
        # anything else falls back to the general matrix exponential
        h = -1j * a
        if np.allclose(h, h.conj().T, rtol=0.0, atol=1e-12):
            vals, vecs = np.linalg.eigh(h)
            out = (vecs * np.exp(1j * vals)) @ vecs.conj().T
            return out.real if not self.complex_entries else out
        return expm(a)

    def log(self, g: np.ndarray) -> np.ndarray:
        return self.project_algebra(logm(g))

    def algebra_element(self, coeffs: np.ndarray) -> np.ndarray:
        out = np.zeros_like(self.basis[0])
        for c, E in zip(coeffs, self.basis):
            out = out + c * E
        return out

    def algebra_coords(self, a: np.ndarray) -> np.ndarray:
        """Coordinates w.r.t. the basis (real, via the Frobenius pairing)."""
        gram = np.array([[np.real(np.vdot(E, F)) for F in self.basis] for E in self.basis])
        rhs = np.array([np.real(np.vdot(E, a)) for E in self.basis])
        return np.linalg.solve(gram, rhs)

    def project_algebra(self, a: np.ndarray) -> np.ndarray:
        return self.algebra_element(self.algebra_coords(a))

    def random_algebra(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.algebra_element(scale * rng.standard_normal(self.dim))

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.exp(self.random_algebra(rng, scale))

    def in_group(self, g: np.ndarray, tol: float = 1e-10) -> bool:
        ortho = np.linalg.norm(g.conj().T @ g - np.eye(self.n)) <= tol
        if self.family in ("SU", "SO"):
            return ortho and abs(np.linalg.det(g) - 1) <= tol
        return ortho

    def in_algebra(self, a: np.ndarray, tol: float = 1e-10) -> bool:
        anti = np.linalg.norm(a + a.conj().T) <= tol
        if self.family in ("SU",):
            return anti and abs(np.trace(a)) <= tol
        if self.family == "SO":
            return anti and np.linalg.norm(np.imag(a)) <= tol
        return anti

    def adjoint(self, g: np.ndarray, a: np.ndarray) -> np.ndarray:
        return g @ a @ np.linalg.inv(g)


def _eij(n: int, i: int, j: int, val, complex_entries=True) -> np.ndarray:
    M = np.zeros((n, n), dtype=complex if complex_entries else float)
    M[i, j] = val
    return M


def unitary(n: int) -> MatrixGroup:
    """U(n): algebra = anti-Hermitian matrices, dimension n^2."""
    basis = []
    for i in range(n):
        basis.append(_eij(n, i, i, 1j))
    for i in range(n):
        for j in range(i + 1, n):
            basis.append(_eij(n, i, j, 1.0) + _eij(n, j, i, -1.0))
            basis.append(_eij(n, i, j, 1j) + _eij(n, j, i, 1j))
    return MatrixGroup("U", n, basis, label="U(%d)" % n)


def special_unitary(n: int) -> MatrixGroup:
    """SU(n): traceless anti-Hermitian algebra, dimension n^2 - 1."""
    basis = []
    for i in range(n - 1):
        basis.append(_eij(n, i, i, 1j) + _eij(n, i + 1, i + 1, -1j))
    for i in range(n):
        for j in range(i + 1, n):
            basis.append(_eij(n, i, j, 1.0) + _eij(n, j, i, -1.0))
            basis.append(_eij(n, i, j, 1j) + _eij(n, j, i, 1j))
    return MatrixGroup("SU", n, basis, label="SU(%d)" % n)


def special_orthogonal(n: int) -> MatrixGroup:
    """SO(n): real antisymmetric algebra, dimension n(n-1)/2."""
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            basis.append(_eij(n, i, j, 1.0, False) + _eij(n, j, i, -1.0, False))
    return MatrixGroup("SO", n, basis, complex_entries=False, label="SO(%d)" % n)


def group_from_json(data: dict) -> MatrixGroup:
    """Descriptor {"family": "SU"|"U"|"SO", "n": n}."""
    family = data["family"]
    n = int(data["n"])
    if family == "U":
        return unitary(n)
    if family == "SU":
        return special_unitary(n)
    if family == "SO":
        return special_orthogonal(n)
    raise ValueError("unknown group family %r" % (family,))
