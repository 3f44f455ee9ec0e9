import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyspec import genlab as g
from polyspec.errors import BadInterval, OrderTooSmall, SingularLeadingCoefficient
from polyspec.linalg import eigenvalues, is_hermitian, is_normal, is_unitary, operator_p_norm
from polyspec.matpoly import (
    MatrixPolynomial,
    coefficient_differences,
    companion,
    companion_is_normal_predicate,
    leading_inverse,
    tuple_operator_p_norm,
)

from conftest import seeds

small = st.integers(1, 6)


def test_splitmix_reference_values():
    # first outputs of the reference SplitMix64 stream seeded with 0
    state, out = 0, []
    for _ in range(3):
        out.append(g.splitmix64(state))
        state = (state + 0x9E3779B97F4A7C15) & g.MASK64
    assert out == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_split_seed_distinct():
    children = {g.split_seed(42, i) for i in range(10_000)}
    assert len(children) == 10_000


@given(seeds)
def test_box_muller_moments(seed):
    z = g.Rng(seed).normal(20_000)
    assert abs(z.mean()) < 0.05 and abs(z.std() - 1) < 0.05


def test_rng_integers_inclusive():
    rng = g.Rng(1)
    draws = {rng.integers(1, 3) for _ in range(300)}
    assert draws == {1, 2, 3}


# ---- matrices


def test_unitary_examples():
    u1 = g.gen_unitary(1, 5)
    assert abs(abs(u1[0, 0]) - 1) < 1e-15
    assert np.array_equal(g.gen_unitary(4, 9), g.gen_unitary(4, 9))
    assert operator_p_norm(g.gen_unitary(6, 2), 2) == pytest.approx(1, abs=1e-9)


def test_hermitian_interval_examples():
    assert np.allclose(g.gen_hermitian_in_interval(4, 2.5, 2.5, 1), 2.5 * np.eye(4), atol=1e-12)
    h = g.gen_hermitian_in_interval(1, 3.0, 1.0, 8)
    assert 1 <= h[0, 0].real <= 3 and h[0, 0].imag == 0
    with pytest.raises(BadInterval):
        g.gen_hermitian_in_interval(3, 1.0, 2.0, 0)
    with pytest.raises(BadInterval):
        g.gen_hermitian_in_interval(3, 1.0, 0.0, 0)


def test_other_matrix_examples():
    assert is_normal(g.gen_normal(5, 3), 1e-9)
    h = g.gen_hermitian(5, 3)
    assert np.array_equal(h, h.conj().T)
    assert not g.gen_arbitrary(4, 1, scale=0.0).any()


@given(seeds, small)
def test_matrix_families_satisfy_predicates(seed, n):
    assert is_unitary(g.gen_unitary(n, seed), 1e-10)
    assert is_normal(g.gen_normal(n, seed), 1e-9)
    assert is_hermitian(g.gen_hermitian(n, seed), 1e-9)
    h = g.gen_hermitian_in_interval(n, 4.0, 0.5, seed)
    lam = eigenvalues(h).eigenvalues
    assert is_hermitian(h, 1e-9)
    assert np.all(lam.real >= 0.5 - 1e-9) and np.all(lam.real <= 4.0 + 1e-9)


@given(seeds, st.integers(2, 8))
def test_orthonormal_pair(seed, n):
    x, y = g.gen_orthonormal_pair(n, seed)
    assert abs(np.linalg.norm(x) - 1) < 1e-12 and abs(np.linalg.norm(y) - 1) < 1e-12
    assert abs(np.vdot(x, y)) <= 1e-12
    x2, y2 = g.gen_orthonormal_pair(n, seed)
    assert np.array_equal(x, x2) and np.array_equal(y, y2)


def test_orthonormal_pair_needs_two_dimensions():
    with pytest.raises(OrderTooSmall):
        g.gen_orthonormal_pair(1, 0)


# ---- polynomials


def test_monic_normal_companion_examples():
    p = g.gen_monic_normal_companion(2, 3, 4)
    assert companion_is_normal_predicate(p) and is_normal(companion(p), 1e-9)
    p1 = g.gen_monic_normal_companion(3, 1, 4)
    assert is_normal(companion(p1), 1e-9)
    coeffs = list(p.coeffs[:-1])
    coeffs[1] = coeffs[1] + 1e-3
    assert not companion_is_normal_predicate(MatrixPolynomial.monic(coeffs))


@given(seeds, small, st.integers(1, 4))
def test_polynomial_families(seed, n, m):
    p = g.gen_monic_normal_companion(n, m, seed)
    assert p.is_monic() and companion_is_normal_predicate(p) and is_normal(companion(p), 1e-9)
    a = g.gen_monic_arbitrary(n, m, seed)
    assert a.is_monic() and (a.n, a.m) == (n, m)
    if m <= 2:
        h = g.gen_monic_hermitian_companion(n, m, seed)
        assert is_hermitian(companion(h), 1e-12)
    else:
        with pytest.raises(ValueError):
            g.gen_monic_hermitian_companion(n, m, seed)


@given(seeds, small, st.integers(1, 3), st.floats(0.0, 0.999))
def test_nonmonic_ball(seed, n, m, frac):
    center = g.gen_well_conditioned(n, m, seed)
    p = g.gen_nonmonic_in_ball(center, frac, seed + 1)
    s = operator_p_norm(leading_inverse(center), 1)
    dist = tuple_operator_p_norm(coefficient_differences(p, center, include_leading=True), 1)
    assert abs(dist - frac / s) <= 1e-10 * max(1.0, frac / s)
    leading_inverse(p)  # nonsingular: raises otherwise


def test_nonmonic_ball_edge_cases():
    center = g.gen_well_conditioned(2, 2, 0)
    same = g.gen_nonmonic_in_ball(center, 0.0, 1)
    assert all(np.array_equal(a, b) for a, b in zip(same.coeffs, center.coeffs))
    singular = MatrixPolynomial((np.eye(2), np.zeros((2, 2))))
    with pytest.raises(SingularLeadingCoefficient):
        g.gen_nonmonic_in_ball(singular, 0.5, 0)


@given(seeds, st.floats(1e-4, 1.0))
def test_normal_pair(seed, eps):
    a, b = g.gen_normal_pair(4, seed, eps)
    assert is_normal(a, 1e-9) and is_normal(b, 1e-9)


# ---- declarative specs


@pytest.mark.parametrize("family", [f for f in g.FAMILIES])
def test_generate_is_deterministic(family):
    kw = {"a": 3.0, "b": 1.0} if family == "hermitian-in-interval" else {}
    spec = g.GenSpec(family, 3, 2, seed=77, **kw)
    one, two = g.generate(spec), g.generate(spec)
    flat = lambda v: np.concatenate([np.ravel(x) for x in (v.coeffs if isinstance(v, MatrixPolynomial) else v if isinstance(v, tuple) else [v])])  # noqa: E731
    assert np.array_equal(flat(one), flat(two))


def test_genspec_validation():
    with pytest.raises(ValueError):
        g.GenSpec("banana", 3)
    with pytest.raises(ValueError):
        g.GenSpec("unitary", 0)
    with pytest.raises(BadInterval):
        g.GenSpec("hermitian-in-interval", 3)
    assert g.GenSpec("unitary", 2, seed=3).to_dict() == {"family": "unitary", "n": 2, "seed": 3, "scale": 1.0}
