import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyspec.errors import ConvergenceFailure, SingularMatrix, UnsupportedPNorm
from polyspec.genlab import gen_unitary
from polyspec.linalg import (
    INF,
    as_matrix,
    as_pnorm,
    conjugate_transpose,
    determinant,
    eigenvalues,
    hessenberg,
    inverse,
    is_hermitian,
    is_normal,
    is_unitary,
    lu_decompose,
    matrix_p_norm,
    operator_p_norm,
)
from polyspec.matching import optimal_matching_distance

from conftest import cplx, rng_for, seeds


def cofactor_det(a):
    n = a.shape[0]
    if n == 1:
        return a[0, 0]
    return sum(
        (-1) ** j * a[0, j] * cofactor_det(np.delete(np.delete(a, 0, 0), j, 1)) for j in range(n)
    )


# ---- construction and p-norm parsing


def test_pnorm_parsing():
    assert as_pnorm("inf") == INF
    assert as_pnorm(2) == 2.0
    with pytest.raises(ValueError):
        as_pnorm(0.5)


def test_non_finite_entries_rejected():
    with pytest.raises(ValueError):
        as_matrix([[np.nan, 0], [0, 1]])
    with pytest.raises(ValueError):
        as_matrix(np.ones((2, 3)))


# ---- matrix (entrywise) norms


def test_matrix_norm_examples():
    assert matrix_p_norm(np.eye(2), 2) == pytest.approx(math.sqrt(2), abs=1e-15)
    for p in (1, 2, 3, INF):
        assert matrix_p_norm(np.zeros((3, 3)), p) == 0
    a = np.array([[3.0, 4.0], [0.0, 0.0]])
    assert matrix_p_norm(a, INF) == 4
    assert matrix_p_norm(a, 1) == 7
    assert matrix_p_norm(a, 2) == 5


@given(seeds, st.integers(1, 7))
def test_frobenius_is_trace_of_gram(seed, n):
    a = cplx(rng_for(seed), n, n)
    f2 = matrix_p_norm(a, 2) ** 2
    assert f2 == pytest.approx(np.sum(np.abs(a) ** 2), rel=1e-12)
    assert f2 == pytest.approx(np.trace(a @ a.conj().T).real, rel=1e-12)


def test_frobenius_not_norm_of_gram():
    # |A|_F^2 and |A A*|_F differ in general (e.g. for I_2: 2 vs sqrt 2)
    a = np.eye(2)
    assert matrix_p_norm(a, 2) ** 2 != pytest.approx(matrix_p_norm(a @ a.T, 2))


# ---- operator norms


def test_operator_norm_examples():
    for p in (1, 2, INF):
        assert operator_p_norm(np.eye(4), p) == pytest.approx(1.0, abs=1e-14)
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert operator_p_norm(a, 1) == 6
    assert operator_p_norm(a, INF) == 7
    assert operator_p_norm(np.diag([3, -4j]), 2) == pytest.approx(4.0, abs=1e-14)


def test_operator_norm_rejects_other_p():
    with pytest.raises(UnsupportedPNorm):
        operator_p_norm(np.eye(2), 3)


@given(seeds, st.integers(1, 6), st.sampled_from([1.0, 2.0, INF]))
def test_operator_norm_submultiplicative_and_subadditive(seed, n, p):
    rng = rng_for(seed)
    a, b = cplx(rng, n, n), cplx(rng, n, n)
    na, nb = operator_p_norm(a, p), operator_p_norm(b, p)
    assert operator_p_norm(a @ b, p) <= na * nb + 1e-10
    assert operator_p_norm(a + b, p) <= na + nb + 1e-10


@given(seeds, st.integers(1, 7), st.integers(1, 7))
def test_spectral_norm_matches_svd_for_rectangular(seed, r, c):
    a = cplx(rng_for(seed), r, c)
    assert operator_p_norm(a, 2) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)


# ---- LU, determinant, inverse


def test_lu_examples():
    lu = lu_decompose(np.eye(3))
    assert np.array_equal(lu.lower, np.eye(3)) and np.array_equal(lu.upper, np.eye(3))
    assert list(lu.perm) == [0, 1, 2] and lu.sign == 1
    swap = lu_decompose(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert swap.sign == -1 and list(swap.perm) == [1, 0]


@given(seeds, st.integers(1, 8))
def test_lu_reconstruction(seed, n):
    a = cplx(rng_for(seed), n, n)
    lu = lu_decompose(a)
    assert np.allclose(np.tril(lu.lower), lu.lower) and np.allclose(np.diag(lu.lower), 1)
    assert np.allclose(np.triu(lu.upper), lu.upper)
    resid = lu.permutation_matrix @ a - lu.lower @ lu.upper
    assert np.linalg.norm(resid) <= 1e-12 * np.linalg.norm(a)


def test_determinant_examples():
    assert determinant(np.eye(4)) == 1
    assert determinant(np.diag([2, 3j])) == pytest.approx(6j, abs=1e-15)


@given(seeds)
def test_determinant_vs_cofactor_oracle(seed):
    a = cplx(rng_for(seed), 3, 3)
    want = cofactor_det(a)
    assert abs(determinant(a) - want) <= 1e-10 * abs(want)


@given(seeds, st.integers(1, 6))
def test_determinant_multiplicative(seed, n):
    rng = rng_for(seed)
    a, b = cplx(rng, n, n), cplx(rng, n, n)
    want = determinant(a) * determinant(b)
    assert abs(determinant(a @ b) - want) <= 1e-9 * abs(want)


def test_inverse_examples():
    assert np.array_equal(inverse(np.eye(3)), np.eye(3))
    assert np.allclose(inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]), atol=0)
    assert np.allclose(inverse(np.array([[1.0, 1.0], [0.0, 1.0]])), [[1, -1], [0, 1]], atol=0)


def test_inverse_singular():
    with pytest.raises(SingularMatrix):
        inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(SingularMatrix):
        inverse(np.zeros((2, 2)))


@given(seeds, st.integers(1, 8))
def test_inverse_residual(seed, n):
    a = cplx(rng_for(seed), n, n)
    cond = np.linalg.cond(a)
    assert np.linalg.norm(a @ inverse(a) - np.eye(n)) <= 1e-13 * n * cond


# ---- eigenvalues


def test_eigen_examples():
    res = eigenvalues(np.diag([1.0, 2.0, 3.0]))
    assert res.converged and sorted(res.eigenvalues.real) == pytest.approx([1, 2, 3])
    u = gen_unitary(4, 11)
    lam = np.array([1, 1j, -1, -1j])
    got = eigenvalues((u * lam) @ u.conj().T).eigenvalues
    assert optimal_matching_distance(got, lam).distance <= 1e-9
    comp = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert optimal_matching_distance(eigenvalues(comp).eigenvalues, [1j, -1j]).distance <= 1e-12


@given(seeds, st.integers(1, 20))
def test_eigen_trace_and_det(seed, n):
    a = cplx(rng_for(seed), n, n)
    lam = eigenvalues(a).eigenvalues
    assert len(lam) == n
    tr, det = np.trace(a), determinant(a)
    assert abs(lam.sum() - tr) <= 1e-8 * max(1.0, abs(tr), np.linalg.norm(a))
    assert abs(np.prod(lam) - det) <= 1e-8 * abs(det)


@given(seeds, st.integers(1, 20))
def test_eigen_constructed_spectrum(seed, n):
    rng = rng_for(seed)
    lam = cplx(rng, n)
    q, _ = np.linalg.qr(cplx(rng, n, n))
    got = eigenvalues((q * lam) @ q.conj().T).eigenvalues
    assert optimal_matching_distance(got, lam).distance <= 1e-9


def test_eigen_agrees_with_lapack_on_nonnormal():
    rng = rng_for(5)
    for n in (5, 12, 20):
        a = cplx(rng, n, n)
        got = eigenvalues(a).eigenvalues
        assert optimal_matching_distance(got, np.linalg.eigvals(a)).distance <= 1e-10


def test_eigen_edge_cases():
    assert eigenvalues(np.zeros((3, 3))).eigenvalues.tolist() == [0, 0, 0]
    jordan = np.diag(np.ones(4), 1)
    assert np.all(np.abs(eigenvalues(jordan).eigenvalues) < 1e-12)
    res = eigenvalues(np.array([[5.0 + 2j]]))
    assert res.eigenvalues[0] == 5 + 2j


def test_eigen_convergence_failure_carries_partial(monkeypatch):
    import polyspec.linalg as la

    monkeypatch.setattr(la, "MAX_ITER_PER_ORDER", 0)
    with pytest.raises(ConvergenceFailure) as info:
        la.eigenvalues(cplx(rng_for(1), 6, 6))
    assert info.value.partial is not None and not info.value.partial.converged


@given(seeds, st.integers(1, 10))
def test_hessenberg_preserves_spectrum(seed, n):
    a = cplx(rng_for(seed), n, n)
    h = hessenberg(a)
    assert np.allclose(np.tril(h, -2), 0)
    assert optimal_matching_distance(np.linalg.eigvals(h), np.linalg.eigvals(a)).distance <= 1e-8 * (1 + np.linalg.norm(a))


# ---- structure predicates


def test_predicate_examples():
    eye = np.eye(3)
    assert is_hermitian(eye) and is_normal(eye) and is_unitary(eye)
    j = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert not (is_hermitian(j) or is_normal(j) or is_unitary(j))
    theta = rng_for(3).uniform(0, 2 * np.pi, 5)
    assert is_unitary(np.diag(np.exp(1j * theta)))
    assert np.array_equal(conjugate_transpose(np.array([[1j, 2]])), np.array([[-1j], [2]]))


@given(seeds, st.integers(1, 8))
def test_hermitian_and_unitary_imply_normal(seed, n):
    rng = rng_for(seed)
    g = cplx(rng, n, n)
    h = (g + g.conj().T) / 2
    u = gen_unitary(n, seed)
    assert is_hermitian(h) and is_normal(h)
    assert is_unitary(u) and is_normal(u)
