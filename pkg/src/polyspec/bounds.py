"""Spectral-variation inequalities evaluated as (lhs, rhs) pairs.

Every ``check_*`` returns a BoundReport.  Hypotheses are advisory by default:
failures are listed in ``failed_hypotheses`` and the ratio is withheld.  With
``strict=True`` a failed hypothesis raises HypothesisViolation instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import HypothesisViolation, SizeMismatch
from .linalg import (
    INF,
    as_matrix,
    as_pnorm,
    determinant,
    eigenvalues,
    is_hermitian,
    is_normal,
    is_unitary,
    matrix_p_norm,
    operator_p_norm,
)
from .matching import frobenius_matching_distance, optimal_matching_distance
from .matpoly import (
    MatrixPolynomial,
    _require_monic,
    coefficient_differences,
    companion,
    companion_is_normal_predicate,
    evaluate,
    leading_inverse,
    polynomial_spectrum,
    tuple_matrix_p_norm,
    tuple_operator_p_norm,
)

HOLDS_RTOL = 1e-9
STRUCTURE_TOL = 1e-9
VECTOR_TOL = 1e-10


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass
class BoundReport:
    bound_id: str
    lhs: float
    rhs: float
    holds: bool
    slack_ratio: Optional[float]
    constants: dict = field(default_factory=dict)
    hypotheses_met: bool = True
    failed_hypotheses: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    degenerate: bool = False

    @property
    def violation(self) -> bool:
        return self.hypotheses_met and not self.holds

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "bound_id": self.bound_id,
                "lhs": self.lhs,
                "rhs": self.rhs,
                "holds": self.holds,
                "slack_ratio": self.slack_ratio,
                "constants": self.constants,
                "hypotheses_met": self.hypotheses_met,
                "failed_hypotheses": self.failed_hypotheses,
                "checks": self.checks,
                "degenerate": self.degenerate,
            }
        )


def within(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + HOLDS_RTOL * max(1.0, rhs)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


def _report(bound_id, lhs, rhs, failed, strict, constants=None, checks=None) -> BoundReport:
    failed = [f for f in failed if f]
    if strict and failed:
        raise HypothesisViolation(bound_id, failed)
    lhs, rhs = float(lhs), float(rhs)
    checks = {k: bool(v) for k, v in (checks or {}).items()}
    holds = within(lhs, rhs) and all(checks.values())
    met = not failed
    return BoundReport(
        bound_id=bound_id,
        lhs=lhs,
        rhs=rhs,
        holds=holds,
        slack_ratio=_ratio(lhs, rhs) if met else None,
        constants=dict(constants or {}),
        hypotheses_met=met,
        failed_hypotheses=failed,
        checks=checks,
        degenerate=(lhs == 0.0 and rhs == 0.0),
    )


def _same_order(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise SizeMismatch(f"matrix orders differ: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def _same_shape(p: MatrixPolynomial, q: MatrixPolynomial):
    if p.n != q.n or p.m != q.m:
        raise SizeMismatch(f"polynomial shapes differ: (n={p.n}, m={p.m}) vs (n={q.n}, m={q.m})")


def _spec(a):
    return eigenvalues(a).eigenvalues


def _op_norm_p(p):
    p = as_pnorm(p)
    operator_p_norm(np.zeros((1, 1)), p)  # raises UnsupportedPNorm early
    return p


# ---------------------------------------------------------------- constants


def pokrzywa_gamma(k: int) -> float:
    """(2/k) * sum_{j=1}^{floor(k/2)} cot((2j-1) pi / (2k)); zero for k = 1."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    terms = [1.0 / math.tan((2 * j - 1) * math.pi / (2 * k)) for j in range(1, k // 2 + 1)]
    return 2.0 / k * math.fsum(terms)


def elsner_constant(k: int) -> int:
    """k for odd k, k - 1 for even k."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return k if k % 2 else k - 1


def gamma_bounds_check(k: int) -> BoundReport:
    """gamma_k <= log2(k) + 0.038; the lower-side gap is informational."""
    g = pokrzywa_gamma(k)
    return _report(
        "gamma-bounds",
        g,
        math.log2(k) + 0.038,
        [],
        False,
        {"k": k, "gamma": g, "lower_gap": g - 2.0 / math.pi * math.log(k)},
    )


# ---------------------------------------------------------------- matrix inequalities


def check_hoffman_wielandt(a, b, strict: bool = False) -> BoundReport:
    """dist_F(spec A, spec B) <= |A - B|_F for normal A, B."""
    a, b = _same_order(a, b)
    failed = [
        "" if is_normal(a, STRUCTURE_TOL) else "A normal",
        "" if is_normal(b, STRUCTURE_TOL) else "B normal",
    ]
    lhs = frobenius_matching_distance(_spec(a), _spec(b)).distance
    rhs = matrix_p_norm(a - b, 2)
    return _report("hoffman-wielandt", lhs, rhs, failed, strict, {"n": a.shape[0]})


def check_normal_vs_arbitrary(a, b, strict: bool = False) -> BoundReport:
    """dist <= (2n - 1) ||A - B||_2 for normal A and any B."""
    a, b = _same_order(a, b)
    n = a.shape[0]
    failed = ["" if is_normal(a, STRUCTURE_TOL) else "A normal"]
    diff = operator_p_norm(a - b, 2)
    lhs = optimal_matching_distance(_spec(a), _spec(b)).distance
    return _report("normal-arbitrary", lhs, (2 * n - 1) * diff, failed, strict, {"n": n, "factor": 2 * n - 1, "norm_diff": diff})


def check_kahan(a, b, p=2, strict: bool = False) -> BoundReport:
    """dist <= (gamma_n + 2) ||A - B||_p for Hermitian A and any B."""
    p = _op_norm_p(p)
    a, b = _same_order(a, b)
    n = a.shape[0]
    failed = ["" if is_hermitian(a, STRUCTURE_TOL) else "A Hermitian"]
    g = pokrzywa_gamma(n)
    diff = operator_p_norm(a - b, p)
    lhs = optimal_matching_distance(_spec(a), _spec(b)).distance
    return _report("kahan", lhs, (g + 2) * diff, failed, strict, {"n": n, "gamma": g, "norm_diff": diff})


def check_elsner(a, b, p=2, strict: bool = False) -> BoundReport:
    """dist <= c(k) k^(1/k) (2M)^(1-1/k) ||A - B||^(1/k),  M = max(||A||, ||B||)."""
    p = _op_norm_p(p)
    a, b = _same_order(a, b)
    k = a.shape[0]
    big_m = max(operator_p_norm(a, p), operator_p_norm(b, p))
    diff = operator_p_norm(a - b, p)
    ck = elsner_constant(k)
    rhs = ck * k ** (1.0 / k) * (2 * big_m) ** (1.0 - 1.0 / k) * diff ** (1.0 / k)
    lhs = optimal_matching_distance(_spec(a), _spec(b)).distance
    return _report("elsner", lhs, rhs, [], strict, {"k": k, "c_k": ck, "M": big_m, "norm_diff": diff})


def check_det_perturbation(a, b, p=2, strict: bool = False) -> BoundReport:
    """|det A - det B| <= n max(||A||, ||B||)^(n-1) ||A - B||."""
    p = _op_norm_p(p)
    a, b = _same_order(a, b)
    n = a.shape[0]
    big_m = max(operator_p_norm(a, p), operator_p_norm(b, p))
    diff = operator_p_norm(a - b, p)
    lhs = abs(determinant(a) - determinant(b))
    return _report("det-perturbation", lhs, n * big_m ** (n - 1) * diff, [], strict, {"n": n, "M": big_m, "norm_diff": diff})


# ---------------------------------------------------------------- monic polynomial inequalities


def _monic_pair(p: MatrixPolynomial, q: MatrixPolynomial):
    _require_monic(p)
    _require_monic(q)
    _same_shape(p, q)
    return coefficient_differences(p, q)


def check_polynomial_hoffman_wielandt(p: MatrixPolynomial, q: MatrixPolynomial, strict: bool = False) -> BoundReport:
    """dist_F(spec P, spec Q) <= |A - Abar|_F when both companions are normal."""
    diffs = _monic_pair(p, q)
    failed = [
        "" if companion_is_normal_predicate(p, STRUCTURE_TOL) else "C_P normal",
        "" if companion_is_normal_predicate(q, STRUCTURE_TOL) else "C_Q normal",
    ]
    lhs = frobenius_matching_distance(polynomial_spectrum(p), polynomial_spectrum(q)).distance
    rhs = tuple_matrix_p_norm(diffs, 2)
    return _report("poly-hoffman-wielandt", lhs, rhs, failed, strict, {"n": p.n, "m": p.m})


def check_polynomial_bdm(p: MatrixPolynomial, q: MatrixPolynomial, pnorm=2, strict: bool = False) -> BoundReport:
    """Checks ||A - Abar||_p <= sum_i ||A_i - Abar_i||_p; reports dist / ||A - Abar||_p.

    The outer constant is only known to exist, so the ratio ``empirical_c`` is
    recorded rather than judged.
    """
    pnorm = _op_norm_p(pnorm)
    diffs = _monic_pair(p, q)
    failed = [
        "" if companion_is_normal_predicate(p, STRUCTURE_TOL) else "C_P normal",
        "" if companion_is_normal_predicate(q, STRUCTURE_TOL) else "C_Q normal",
    ]
    dist = optimal_matching_distance(polynomial_spectrum(p), polynomial_spectrum(q)).distance
    mid = tuple_operator_p_norm(diffs, pnorm)
    total = math.fsum(operator_p_norm(d, pnorm) for d in diffs)
    constants = {"n": p.n, "m": p.m, "dist": dist, "mid": mid, "rhs_sum": total, "empirical_c": _ratio(dist, mid)}
    return _report("poly-bdm", mid, total, failed, strict, constants)


def _is_binomial(poly: MatrixPolynomial) -> bool:
    return all(matrix_p_norm(c, INF) <= STRUCTURE_TOL for c in poly.coeffs[1:-1])


def check_cor_2mn(p: MatrixPolynomial, q: MatrixPolynomial, pnorm=2, strict: bool = False) -> BoundReport:
    """dist <= (2mn - 1) ||A_0 - Abar_0||_p for I z^m + A_0 with unitary A_0."""
    pnorm = _op_norm_p(pnorm)
    _monic_pair(p, q)
    failed = [
        "" if _is_binomial(p) else "P = I z^m + A_0",
        "" if _is_binomial(q) else "Q = I z^m + Abar_0",
        "" if is_unitary(p.coeffs[0], STRUCTURE_TOL) else "A_0 unitary",
        "" if is_unitary(q.coeffs[0], STRUCTURE_TOL) else "Abar_0 unitary",
    ]
    mn = p.m * p.n
    diff = operator_p_norm(p.coeffs[0] - q.coeffs[0], pnorm)
    lhs = optimal_matching_distance(polynomial_spectrum(p), polynomial_spectrum(q)).distance
    return _report("cor-2mn", lhs, (2 * mn - 1) * diff, failed, strict, {"n": p.n, "m": p.m, "factor": 2 * mn - 1, "norm_diff": diff})


def check_polynomial_kahan(p: MatrixPolynomial, q: MatrixPolynomial, pnorm=2, strict: bool = False) -> BoundReport:
    """dist <= (gamma_mn + 2) ||A - Abar||_p when C_P is Hermitian."""
    pnorm = _op_norm_p(pnorm)
    diffs = _monic_pair(p, q)
    cp = companion(p)
    failed = ["" if is_hermitian(cp, STRUCTURE_TOL) else "C_P Hermitian"]
    mn = p.m * p.n
    g = pokrzywa_gamma(mn)
    mid = tuple_operator_p_norm(diffs, pnorm)
    total = math.fsum(operator_p_norm(d, pnorm) for d in diffs)
    lhs = optimal_matching_distance(polynomial_spectrum(p), polynomial_spectrum(q)).distance
    constants = {"n": p.n, "m": p.m, "gamma": g, "norm_diff": mid, "rhs_sum": (g + 2) * total}
    checks = {"tuple_norm_le_sum": within(mid, total)}
    return _report("poly-kahan", lhs, (g + 2) * mid, failed, strict, constants, checks)


def nbounded_m_prime(m: int, n: int, pnorm, big_n: float) -> float:
    """Upper bound M' on ||C_A||_p given the tuple bound |A|_p <= N."""
    pnorm = as_pnorm(pnorm)
    mn = m * n
    if pnorm == INF:
        return mn * max(big_n, 1.0)
    exponent = max((1.0 - 1.0 / pnorm) - 1.0 / pnorm, 0.0)
    return mn**exponent * (big_n**pnorm + (m - 1) * n) ** (1.0 / pnorm)


def check_nbounded_theorem(p: MatrixPolynomial, q: MatrixPolynomial, pnorm, big_n: float, strict: bool = False) -> BoundReport:
    """dist <= c ||A - Abar||_p^(1/mn) for monic tuples with |A|_p, |Abar|_p <= N."""
    pnorm = _op_norm_p(pnorm)
    diffs = _monic_pair(p, q)
    norm_p = tuple_matrix_p_norm(p.coeffs[:-1], pnorm)
    norm_q = tuple_matrix_p_norm(q.coeffs[:-1], pnorm)
    failed = [
        "" if norm_p <= big_n else f"|A|_p <= N ({norm_p:.6g} > {big_n:.6g})",
        "" if norm_q <= big_n else f"|Abar|_p <= N ({norm_q:.6g} > {big_n:.6g})",
    ]
    mn = p.m * p.n
    m_prime = nbounded_m_prime(p.m, p.n, pnorm, big_n)
    ck = elsner_constant(mn)
    c = ck * mn ** (1.0 / mn) * (2 * m_prime) ** (1.0 - 1.0 / mn)
    diff = tuple_operator_p_norm(diffs, pnorm)
    lhs = optimal_matching_distance(polynomial_spectrum(p), polynomial_spectrum(q)).distance
    comp_p = operator_p_norm(companion(p), pnorm)
    comp_q = operator_p_norm(companion(q), pnorm)
    constants = {
        "n": p.n, "m": p.m, "N": big_n, "M_prime": m_prime, "c_mn": ck, "c": c,
        "norm_diff": diff, "companion_norm_P": comp_p, "companion_norm_Q": comp_q,
    }
    checks = {"companion_norm_P_le_M_prime": within(comp_p, m_prime), "companion_norm_Q_le_M_prime": within(comp_q, m_prime)}
    return _report("nbounded", lhs, c * diff ** (1.0 / mn), failed, strict, constants, checks)


# ---------------------------------------------------------------- non-monic polynomials


def _dist_to_set(x: complex, values: np.ndarray) -> float:
    return float(np.min(np.abs(values - x)))


def check_nonmonic_theorem(p: MatrixPolynomial, q: MatrixPolynomial, center: MatrixPolynomial, strict: bool = False) -> BoundReport:
    """dist(spec P, spec Q) < c ||P - Q||_1^(1/mn) for P, Q in the 1-norm ball around ``center``.

    The ball radius is 1 / ||center_m^{-1}||_1 and every tuple norm is the
    max over all m + 1 block 1-norms.  Sub-assertion: every eigenvalue of P
    and Q lies in |z| < 2 + ||center_m^{-1}||_1 ||center||_1.
    """
    _same_shape(p, center)
    _same_shape(q, center)
    n, m = center.n, center.m
    mn = m * n
    s = operator_p_norm(leading_inverse(center), 1)
    radius = 1.0 / s
    d_p = tuple_operator_p_norm(coefficient_differences(p, center, include_leading=True), 1)
    d_q = tuple_operator_p_norm(coefficient_differences(q, center, include_leading=True), 1)
    failed = [
        "" if d_p < radius else f"||P - center||_1 < 1/||center_m^-1||_1 ({d_p:.6g} >= {radius:.6g})",
        "" if d_q < radius else f"||Q - center||_1 < 1/||center_m^-1||_1 ({d_q:.6g} >= {radius:.6g})",
    ]
    if strict and any(failed):
        raise HypothesisViolation("nonmonic-thm37", [f for f in failed if f])
    center_norm = tuple_operator_p_norm(center.coeffs, 1)
    sn = s * center_norm
    big_l = ((2.0 + sn) ** (m + 1) - 1.0) / (1.0 + sn)
    k = radius + center_norm
    c = (n * big_l ** (n - 1) * k ** (n - 1)) ** (1.0 / mn)
    diff = tuple_operator_p_norm(coefficient_differences(p, q, include_leading=True), 1)

    sp, sq = polynomial_spectrum(p), polynomial_spectrum(q)
    lhs = optimal_matching_distance(sp, sq).distance
    bound = 2.0 + sn
    peak = float(max(np.abs(sp).max(), np.abs(sq).max()))

    # det-based proof step, evaluated with and without the |det(leading)| factor
    def step(src, other_spec, other):
        lead_det = abs(determinant(other.leading))
        plain = scaled = True
        for lam in src:
            gap = _dist_to_set(lam, other_spec) ** mn
            dv = abs(determinant(evaluate(other, lam)))
            plain &= within(gap, dv)
            scaled &= within(gap, dv / lead_det)
        return plain, scaled

    p1, s1 = step(sp, sq, q)
    p2, s2 = step(sq, sp, p)
    constants = {
        "n": n, "m": m, "leading_inverse_norm": s, "radius": radius, "center_norm": center_norm,
        "L": big_l, "c": c, "norm_diff": diff, "dist_P_center": d_p, "dist_Q_center": d_q,
        "localization_bound": bound, "max_eigenvalue_modulus": peak,
        "det_step_as_written": p1 and p2, "det_step_with_leading_det": s1 and s2,
    }
    checks = {"eigenvalue_localization": peak < bound}
    return _report("nonmonic-thm37", lhs, c * diff ** (1.0 / mn), failed, False, constants, checks)


# ---------------------------------------------------------------- Wielandt


def _vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).ravel()
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def _pair_hypotheses(x, y, n):
    if x.size != n or y.size != n:
        raise SizeMismatch(f"vectors must have length {n}")
    return [
        "" if abs(np.linalg.norm(x) - 1) <= VECTOR_TOL else "|x| = 1",
        "" if abs(np.linalg.norm(y) - 1) <= VECTOR_TOL else "|y| = 1",
        "" if abs(np.vdot(x, y)) <= VECTOR_TOL else "x orthogonal to y",
    ]


def _interval_hypotheses(mat, a, b, label):
    failed = []
    if not (0 < b <= a):
        failed.append("0 < b <= a")
    if not is_hermitian(mat, VECTOR_TOL):
        failed.append(f"{label} Hermitian")
        return failed
    lam = _spec(0.5 * (mat + mat.conj().T)).real
    if lam.min() < b - 1e-9 or lam.max() > a + 1e-9:
        failed.append(f"spectrum of {label} in [b, a]")
    return failed


def _wielandt_factor(a, b):
    return ((a - b) / (a + b)) ** 2 if a + b != 0 else math.nan


def check_wielandt_scalar(mat, a: float, b: float, x, y, strict: bool = False) -> BoundReport:
    """|x* A y|^2 <= ((a-b)/(a+b))^2 (x* A x)(y* A y) for bI <= A <= aI, x orthogonal to y."""
    mat = as_matrix(mat)
    x, y = _vector(x), _vector(y)
    failed = _pair_hypotheses(x, y, mat.shape[0]) + _interval_hypotheses(mat, a, b, "A")
    qx, qy = np.vdot(x, mat @ x), np.vdot(y, mat @ y)
    lhs = abs(np.vdot(x, mat @ y)) ** 2
    rhs = _wielandt_factor(a, b) * qx.real * qy.real
    scale = 1.0 + matrix_p_norm(mat, 2)
    checks = {"quadratic_forms_real": max(abs(qx.imag), abs(qy.imag)) <= VECTOR_TOL * scale}
    return _report("wielandt-scalar", lhs, rhs, failed, strict, {"a": a, "b": b, "xAx": qx.real, "yAy": qy.real}, checks)


def check_wielandt_polynomial(poly: MatrixPolynomial, a: float, b: float, x, y, lam, strict: bool = False) -> BoundReport:
    """|x* P(lam) y|^2 <= ((a-b)/(a+b))^2 (x* P(|lam|) x)(y* P(|lam|) y) for bI <= A_i <= aI."""
    x, y = _vector(x), _vector(y)
    lam = complex(lam)
    failed = _pair_hypotheses(x, y, poly.n)
    for i, c in enumerate(poly.coeffs):
        failed += _interval_hypotheses(c, a, b, f"A_{i}")
    at_lam = evaluate(poly, lam)
    at_mod = evaluate(poly, abs(lam))
    qx, qy = np.vdot(x, at_mod @ x), np.vdot(y, at_mod @ y)
    lhs = abs(np.vdot(x, at_lam @ y)) ** 2
    rhs = _wielandt_factor(a, b) * qx.real * qy.real
    scale = 1.0 + matrix_p_norm(at_mod, 2)
    checks = {
        "quadratic_forms_real": max(abs(qx.imag), abs(qy.imag)) <= VECTOR_TOL * scale,
        "quadratic_forms_positive": qx.real > 0 and qy.real > 0,
    }
    constants = {"a": a, "b": b, "lambda_abs": abs(lam), "xPx": qx.real, "yPy": qy.real}
    return _report("wielandt-poly", lhs, rhs, failed, strict, constants, checks)


# ---------------------------------------------------------------- registry

# bound id -> (checker, input kinds, extra parameters)
BOUNDS = {
    "hoffman-wielandt": (check_hoffman_wielandt, ("matrix", "matrix"), ()),
    "poly-hoffman-wielandt": (check_polynomial_hoffman_wielandt, ("poly", "poly"), ()),
    "normal-arbitrary": (check_normal_vs_arbitrary, ("matrix", "matrix"), ()),
    "kahan": (check_kahan, ("matrix", "matrix"), ("p",)),
    "gamma-bounds": (gamma_bounds_check, (), ("k",)),
    "poly-bdm": (check_polynomial_bdm, ("poly", "poly"), ("p",)),
    "cor-2mn": (check_cor_2mn, ("poly", "poly"), ("p",)),
    "poly-kahan": (check_polynomial_kahan, ("poly", "poly"), ("p",)),
    "elsner": (check_elsner, ("matrix", "matrix"), ("p",)),
    "nbounded": (check_nbounded_theorem, ("poly", "poly"), ("p", "N")),
    "det-perturbation": (check_det_perturbation, ("matrix", "matrix"), ("p",)),
    "nonmonic-thm37": (check_nonmonic_theorem, ("poly", "poly", "poly"), ()),
    "wielandt-scalar": (check_wielandt_scalar, ("matrix",), ("a", "b", "x", "y")),
    "wielandt-poly": (check_wielandt_polynomial, ("poly",), ("a", "b", "x", "y", "lambda")),
}


def run_check(bound_id: str, inputs, params: dict, strict: bool = False) -> BoundReport:
    """Dispatch by id; ``inputs`` follow the registry's kinds, ``params`` its extras."""
    try:
        fn, kinds, extras = BOUNDS[bound_id]
    except KeyError:
        raise ValueError(f"unknown bound id {bound_id!r}; choose from {', '.join(BOUNDS)}") from None
    if len(inputs) != len(kinds):
        raise ValueError(f"{bound_id} takes {len(kinds)} inputs, got {len(inputs)}")
    args = list(inputs) + [params[e] for e in extras]
    if bound_id == "gamma-bounds":
        return fn(*args)
    return fn(*args, strict=strict)
