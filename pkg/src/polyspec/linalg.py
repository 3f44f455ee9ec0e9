"""Dense complex linear algebra: norms, LU, determinants, inverses, eigenvalues.

Matrices are plain ``numpy`` complex128 arrays.  A p-norm index is a float
``p >= 1`` or ``math.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _qr
from .errors import ConvergenceFailure, SingularMatrix, UnsupportedPNorm

INF = math.inf

DEFLATION_EPS = 1e-14
SINGULAR_RTOL = 1e-13
MAX_ITER_PER_ORDER = 60
EXCEPTIONAL_EVERY = 15


def as_pnorm(p) -> float:
    """Normalize a p-norm index; accepts numbers and the strings 'inf'/'infinity'."""
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        p = float(p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"p-norm index must satisfy p >= 1, got {p}")
    return p


def pnorm_label(p) -> str:
    p = as_pnorm(p)
    return "inf" if p == INF else format(p, "g")


def as_matrix(a, square: bool = True) -> np.ndarray:
    """Coerce to a finite complex128 2-d array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"expected a nonempty 2-d matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


# ---------------------------------------------------------------- norms


def matrix_p_norm(a, p=2) -> float:
    """Entrywise p-norm; ``p=2`` is the Frobenius norm.

    Sums go through ``math.fsum`` so the value does not depend on the order or
    on interleaved zero entries.
    """
    p = as_pnorm(p)
    mods = np.abs(np.asarray(a, dtype=np.complex128)).ravel()
    if mods.size == 0:
        return 0.0
    if p == INF:
        return float(mods.max())
    if p == 1:
        return math.fsum(mods.tolist())
    if p == 2:
        return math.sqrt(math.fsum((mods * mods).tolist()))
    return math.fsum((mods**p).tolist()) ** (1.0 / p)


def _max_abs_sum(mods: np.ndarray, axis: int) -> float:
    lines = mods.T if axis == 0 else mods
    return max(math.fsum(line) for line in lines.tolist())


def operator_p_norm(a, p=2) -> float:
    """Induced operator norm for p in {1, 2, inf}; works for rectangular input.

    p=1 is the max absolute column sum, p=inf the max absolute row sum and p=2
    the largest singular value, taken as the square root of the top eigenvalue
    of the smaller Gram matrix.
    """
    p = as_pnorm(p)
    a = np.asarray(a, dtype=np.complex128)
    if p == 1:
        return _max_abs_sum(np.abs(a), axis=0)
    if p == INF:
        return _max_abs_sum(np.abs(a), axis=1)
    if p == 2:
        if not np.any(a):
            return 0.0
        rows, cols = a.shape
        gram = a @ a.conj().T if rows < cols else a.conj().T @ a
        gram = 0.5 * (gram + gram.conj().T)
        lam = eigenvalues(gram, balance=False).eigenvalues
        return math.sqrt(max(float(np.max(lam.real)), 0.0))
    raise UnsupportedPNorm(f"operator p-norm is only available for p in {{1, 2, inf}}, got p={p:g}")


# ---------------------------------------------------------------- LU and friends


@dataclass(frozen=True)
class LUResult:
    lower: np.ndarray
    upper: np.ndarray
    perm: np.ndarray  # row order: A[perm] = L @ U
    sign: int

    @property
    def permutation_matrix(self) -> np.ndarray:
        return np.eye(len(self.perm), dtype=np.complex128)[self.perm]


def lu_decompose(a) -> LUResult:
    """Doolittle LU with partial pivoting, ``P A = L U``.

    Zero pivots are left in place; callers decide what counts as singular.
    """
    u = as_matrix(a).copy()
    n = u.shape[0]
    lower = np.eye(n, dtype=np.complex128)
    perm = np.arange(n)
    sign = 1
    for k in range(n - 1):
        piv = k + int(np.argmax(np.abs(u[k:, k])))
        if piv != k:
            u[[k, piv], :] = u[[piv, k], :]
            lower[[k, piv], :k] = lower[[piv, k], :k]
            perm[[k, piv]] = perm[[piv, k]]
            sign = -sign
        if u[k, k] == 0:
            continue
        factors = u[k + 1 :, k] / u[k, k]
        lower[k + 1 :, k] = factors
        u[k + 1 :, k:] -= np.outer(factors, u[k, k:])
        u[k + 1 :, k] = 0
    return LUResult(lower, u, perm, sign)


def determinant(a) -> complex:
    lu = lu_decompose(a)
    return complex(lu.sign * np.prod(np.diag(lu.upper)))


def inverse(a) -> np.ndarray:
    """Inverse via LU; raises SingularMatrix when a pivot is below 1e-13*max|a_ij|."""
    a = as_matrix(a)
    n = a.shape[0]
    lu = lu_decompose(a)
    threshold = SINGULAR_RTOL * matrix_p_norm(a, INF)
    pivots = np.abs(np.diag(lu.upper))
    if threshold == 0 or pivots.min() <= threshold:
        raise SingularMatrix(f"smallest pivot {pivots.min():.3e} at or below tolerance {threshold:.3e}")
    rhs = np.eye(n, dtype=np.complex128)[lu.perm]
    # forward substitution, L unit lower triangular
    y = rhs.copy()
    for i in range(1, n):
        y[i] -= lu.lower[i, :i] @ y[:i]
    x = np.empty_like(y)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - lu.upper[i, i + 1 :] @ x[i + 1 :]) / lu.upper[i, i]
    return x


# ---------------------------------------------------------------- eigenvalues


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    iterations: int
    converged: bool


def balance_matrix(a) -> np.ndarray:
    """Diagonal similarity scaling by powers of two (Parlett-Reinsch)."""
    h = np.array(a, dtype=np.complex128)
    _qr.balance_inplace(h)
    return h


def hessenberg(a) -> np.ndarray:
    """Unitary (Householder) reduction to upper Hessenberg form."""
    h = np.array(a, dtype=np.complex128)
    _qr.hessenberg_inplace(h)
    return h


def eigenvalues(a, balance: bool = True) -> EigenResult:
    """All eigenvalues (with multiplicity) of a square matrix.

    Balancing, Householder reduction to Hessenberg form, then single-shift
    complex QR with Wilkinson shifts and deflation.  Raises ConvergenceFailure
    carrying the partial EigenResult when the 60*n sweep budget runs out.
    """
    a = as_matrix(a)
    h = np.array(a, dtype=np.complex128)
    if balance:
        _qr.balance_inplace(h)
    _qr.hessenberg_inplace(h)
    lam, its, ok = _qr.qr_eigenvalues(h, DEFLATION_EPS, MAX_ITER_PER_ORDER * h.shape[0], EXCEPTIONAL_EVERY)
    result = EigenResult(lam, its, ok)
    if not ok:
        raise ConvergenceFailure(f"QR iteration did not converge within {its} sweeps", partial=result)
    return result


# ---------------------------------------------------------------- structure predicates


def conjugate_transpose(a) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128).conj().T


def _residual_ok(residual: np.ndarray, a: np.ndarray, tol: float) -> bool:
    return matrix_p_norm(residual, 2) <= tol * (1.0 + matrix_p_norm(a, 2))


def is_hermitian(a, tol: float = 1e-10) -> bool:
    a = as_matrix(a)
    return _residual_ok(a - a.conj().T, a, tol)


def is_normal(a, tol: float = 1e-10) -> bool:
    a = as_matrix(a)
    ah = a.conj().T
    return _residual_ok(a @ ah - ah @ a, a, tol)


def is_unitary(a, tol: float = 1e-10) -> bool:
    a = as_matrix(a)
    return _residual_ok(a @ a.conj().T - np.eye(a.shape[0]), a, tol)
