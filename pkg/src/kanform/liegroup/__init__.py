"""Numerical differential geometry on compact matrix groups."""

from .groups import MatrixGroup, group_from_json, special_orthogonal, special_unitary, unitary
from .polynomials import InvariantPolynomial, chern_polynomial, polynomial_from_json, trace_form
from .quadrature import simplex_rule
