"""Matrix polynomials, their block companion linearization, and tuple norms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotMonic, OracleSizeExceeded, SingularLeadingCoefficient, SingularMatrix, SizeMismatch
from .linalg import (
    as_matrix,
    eigenvalues,
    inverse,
    is_normal,
    is_unitary,
    matrix_p_norm,
    operator_p_norm,
)

MONIC_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """P(z) = A_m z^m + ... + A_1 z + A_0, coefficients stored A_0 first."""

    coeffs: tuple

    def __post_init__(self):
        mats = tuple(as_matrix(c) for c in self.coeffs)
        if len(mats) < 2:
            raise ValueError("a matrix polynomial needs degree m >= 1 (at least two coefficients)")
        n = mats[0].shape[0]
        if any(c.shape != (n, n) for c in mats):
            raise SizeMismatch("all coefficients must share the same order")
        for c in mats:
            c.flags.writeable = False
        object.__setattr__(self, "coeffs", mats)

    @classmethod
    def monic(cls, lower: Sequence) -> "MatrixPolynomial":
        """Build I z^m + A_{m-1} z^{m-1} + ... + A_0 from (A_0, ..., A_{m-1})."""
        lower = [as_matrix(c) for c in lower]
        return cls(tuple(lower) + (np.eye(lower[0].shape[0], dtype=np.complex128),))

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> np.ndarray:
        return self.coeffs[-1]

    def is_monic(self, tol: float = MONIC_TOL) -> bool:
        return matrix_p_norm(self.leading - np.eye(self.n), np.inf) <= tol

    def __repr__(self):
        return f"MatrixPolynomial(n={self.n}, m={self.m}, monic={self.is_monic()})"


def evaluate(poly: MatrixPolynomial, z) -> np.ndarray:
    """Horner evaluation of P(z)."""
    z = complex(z)
    acc = poly.coeffs[-1].copy()
    for c in reversed(poly.coeffs[:-1]):
        acc = acc * z + c
    return acc


def _require_monic(poly: MatrixPolynomial):
    if not poly.is_monic():
        raise NotMonic("leading coefficient is not the identity (tolerance 1e-12)")


def companion(poly: MatrixPolynomial) -> np.ndarray:
    """Block companion matrix of a monic polynomial (mn x mn).

    Identity blocks on the block superdiagonal, last block row
    (-A_0, -A_1, ..., -A_{m-1}), zeros elsewhere.
    """
    _require_monic(poly)
    n, m = poly.n, poly.m
    c = np.zeros((m * n, m * n), dtype=np.complex128)
    for k in range(m - 1):
        c[k * n : (k + 1) * n, (k + 1) * n : (k + 2) * n] = np.eye(n)
    for i in range(m):
        c[(m - 1) * n :, i * n : (i + 1) * n] = -poly.coeffs[i]
    return c


def leading_inverse(poly: MatrixPolynomial) -> np.ndarray:
    try:
        return inverse(poly.leading)
    except SingularMatrix as exc:
        raise SingularLeadingCoefficient(str(exc)) from None


def monicize(poly: MatrixPolynomial) -> MatrixPolynomial:
    """A_m^{-1} P(z); returns the input unchanged when it is already monic."""
    if poly.is_monic():
        return poly
    inv = leading_inverse(poly)
    return MatrixPolynomial.monic([inv @ c for c in poly.coeffs[:-1]])


def polynomial_spectrum(poly: MatrixPolynomial) -> np.ndarray:
    """The mn eigenvalues of P, via the companion matrix of the monicized polynomial."""
    return eigenvalues(companion(monicize(poly))).eigenvalues


def _stack(blocks) -> np.ndarray:
    blocks = [np.asarray(b, dtype=np.complex128) for b in blocks]
    if not blocks:
        raise ValueError("empty tuple")
    n = blocks[0].shape[0]
    if any(b.shape != (n, n) for b in blocks):
        raise SizeMismatch("tuple blocks must share the same order")
    return np.hstack(blocks)


def tuple_matrix_p_norm(blocks, p=2) -> float:
    """Entrywise p-norm of a coefficient tuple, (sum_i |A_i|_p^p)^(1/p) or max_i |A_i|_inf."""
    return matrix_p_norm(_stack(blocks), p)


def tuple_operator_p_norm(blocks, p=2) -> float:
    """Operator p-norm of the block row [T_0 T_1 ... T_{k-1}] (n x kn)."""
    return operator_p_norm(_stack(blocks), p)


def coefficient_differences(poly: MatrixPolynomial, other: MatrixPolynomial, include_leading: bool = False):
    """(A_i - B_i) for i < m, or for all i <= m with ``include_leading``."""
    if poly.n != other.n or poly.m != other.m:
        raise SizeMismatch(f"shapes differ: (n={poly.n}, m={poly.m}) vs (n={other.n}, m={other.m})")
    stop = poly.m + 1 if include_leading else poly.m
    return tuple(poly.coeffs[i] - other.coeffs[i] for i in range(stop))


def companion_is_normal_predicate(poly: MatrixPolynomial, tol: float = 1e-9) -> bool:
    """Structural test for normality of the companion matrix, read off the coefficients.

    m >= 3: A_0 unitary and A_1 = ... = A_{m-1} = 0.
    m = 2:  A_0 unitary, A_1 normal and A_0^* A_1 = -A_1^*  (e.g. A_0 = -I, A_1 Hermitian).
    m = 1:  A_0 normal.
    """
    _require_monic(poly)
    a0 = poly.coeffs[0]
    if poly.m == 1:
        return is_normal(a0, tol)
    if not is_unitary(a0, tol):
        return False
    if poly.m == 2:
        a1 = poly.coeffs[1]
        twist = matrix_p_norm(a0.conj().T @ a1 + a1.conj().T, 2)
        return is_normal(a1, tol) and twist <= tol * (1.0 + matrix_p_norm(a1, 2))
    return all(matrix_p_norm(c, np.inf) <= tol for c in poly.coeffs[1:-1])


def cauchy_eigenvalue_bound(poly: MatrixPolynomial) -> float:
    """R = 1 + ||A_m^{-1}||_1 * max_{i<m} ||A_i||_1; every eigenvalue has |lambda| < R."""
    inv = leading_inverse(poly)
    return 1.0 + operator_p_norm(inv, 1) * max(operator_p_norm(c, 1) for c in poly.coeffs[:-1])


def char_poly_oracle(poly: MatrixPolynomial) -> np.ndarray:
    """Coefficients of det P(z), lowest degree first, by explicit expansion (n <= 2, m <= 3)."""
    n, m = poly.n, poly.m
    if n > 2 or m > 3:
        raise OracleSizeExceeded(f"oracle supports n <= 2 and m <= 3, got n={n}, m={m}")
    entry = lambda i, j: np.array([c[i, j] for c in poly.coeffs], dtype=np.complex128)  # noqa: E731
    if n == 1:
        return entry(0, 0)
    return np.convolve(entry(0, 0), entry(1, 1)) - np.convolve(entry(0, 1), entry(1, 0))


def oracle_roots(poly: MatrixPolynomial) -> np.ndarray:
    """Roots of det P(z) from the expanded characteristic polynomial (LAPACK via numpy.roots)."""
    coeffs = char_poly_oracle(poly)
    if abs(coeffs[-1]) == 0:
        raise SingularLeadingCoefficient("det(A_m) vanishes; characteristic polynomial drops degree")
    return np.roots(coeffs[::-1])
