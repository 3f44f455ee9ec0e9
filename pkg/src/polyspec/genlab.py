"""Seeded instance generators for every hypothesis family the bounds need.

Randomness: PCG64 (numpy's implementation, seeded through ``SeedSequence``)
supplies uniform doubles; normals come from the Box-Muller transform on top
of those uniforms, so the whole pipeline is reproducible from one 64-bit
seed.  Child seeds are derived with SplitMix64 (``split_seed``).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import BadInterval, OrderTooSmall
from .linalg import operator_p_norm
from .matpoly import MatrixPolynomial, leading_inverse

MASK64 = (1 << 64) - 1

FAMILIES = (
    "unitary",
    "hermitian",
    "hermitian-in-interval",
    "normal",
    "arbitrary",
    "monic-normal-companion",
    "monic-hermitian-companion",
    "monic-arbitrary",
    "nonmonic-ball",
    "orthonormal-pair",
)


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def split_seed(seed: int, index: int) -> int:
    """Child seed number ``index`` of ``seed``; distinct indices give independent streams."""
    return splitmix64((seed & MASK64) ^ splitmix64(index & MASK64))


class Rng:
    """Uniforms from PCG64, normals by Box-Muller."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, low=0.0, high=1.0, size=None):
        return low + (high - low) * self._gen.random(size)

    def normal(self, size):
        count = int(np.prod(size))
        pairs = (count + 1) // 2
        u1 = 1.0 - self._gen.random(pairs)  # (0, 1], keeps log finite
        u2 = self._gen.random(pairs)
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
        return z[:count].reshape(size)

    def complex_normal(self, size):
        z = self.normal((2,) + tuple(np.atleast_1d(size)))
        return (z[0] + 1j * z[1]) / np.sqrt(2.0)

    def integers(self, low, high):
        """Uniform integer in [low, high] inclusive."""
        return int(low + np.floor(self._gen.random() * (high - low + 1)))

    def log_uniform(self, low, high):
        return float(np.exp(self.uniform(np.log(low), np.log(high))))


# ---------------------------------------------------------------- matrices


def _unitary_from(z: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    phases = np.where(d == 0, 1.0, d / np.where(d == 0, 1.0, np.abs(d)))
    return q * phases[None, :]


def _hermitize(a):
    return 0.5 * (a + a.conj().T)


def gen_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with phase-fixed R diagonal."""
    return _unitary_from(Rng(seed).complex_normal((n, n)))


def gen_hermitian_in_interval(n: int, a: float, b: float, seed: int) -> np.ndarray:
    """U diag(lambda) U* with lambda ~ uniform[b, a]; requires 0 < b <= a."""
    if not (0 < b <= a):
        raise BadInterval(f"need 0 < b <= a, got b={b}, a={a}")
    rng = Rng(seed)
    u = _unitary_from(rng.complex_normal((n, n)))
    lam = rng.uniform(b, a, n)
    return _hermitize((u * lam[None, :]) @ u.conj().T)


def gen_normal(n: int, seed: int) -> np.ndarray:
    rng = Rng(seed)
    u = _unitary_from(rng.complex_normal((n, n)))
    d = rng.complex_normal(n)
    return (u * d[None, :]) @ u.conj().T


def gen_hermitian(n: int, seed: int) -> np.ndarray:
    return _hermitize(Rng(seed).complex_normal((n, n)))


def gen_arbitrary(n: int, seed: int, scale: float = 1.0) -> np.ndarray:
    return scale * Rng(seed).complex_normal((n, n))


def gen_orthonormal_pair(n: int, seed: int):
    """First two columns of a random unitary."""
    if n < 2:
        raise OrderTooSmall("an orthonormal pair needs n >= 2")
    u = gen_unitary(n, seed)
    return u[:, 0].copy(), u[:, 1].copy()


# ---------------------------------------------------------------- polynomials


def gen_monic_normal_companion(n: int, m: int, seed: int) -> MatrixPolynomial:
    """I z^m + A_0 with A_0 = -U, U unitary: the companion's block -A_0 = U is unitary."""
    a0 = -gen_unitary(n, seed)
    zeros = [np.zeros((n, n), dtype=np.complex128)] * (m - 1)
    return MatrixPolynomial.monic([a0] + zeros)


def gen_monic_hermitian_companion(n: int, m: int, seed: int) -> MatrixPolynomial:
    """Monic polynomial whose companion matrix is Hermitian.

    Only m = 1 (A_0 Hermitian) and m = 2 (A_0 = -I, A_1 Hermitian) admit one:
    for m >= 3 the companion has an identity block above the diagonal facing
    a zero block below it.
    """
    if m == 1:
        return MatrixPolynomial.monic([gen_hermitian(n, seed)])
    if m == 2:
        return MatrixPolynomial.monic([-np.eye(n, dtype=np.complex128), gen_hermitian(n, seed)])
    raise ValueError(f"no monic polynomial of degree {m} >= 3 has a Hermitian companion matrix")


def gen_monic_arbitrary(n: int, m: int, seed: int, scale: float = 1.0) -> MatrixPolynomial:
    rng = Rng(seed)
    return MatrixPolynomial.monic([scale * rng.complex_normal((n, n)) for _ in range(m)])


def gen_well_conditioned(n: int, m: int, seed: int, scale: float = 1.0) -> MatrixPolynomial:
    """Non-monic polynomial whose leading coefficient has singular values in [1, 2]."""
    rng = Rng(seed)
    lower = [scale * rng.complex_normal((n, n)) for _ in range(m)]
    u = _unitary_from(rng.complex_normal((n, n)))
    v = _unitary_from(rng.complex_normal((n, n)))
    lead = (u * rng.uniform(1.0, 2.0, n)[None, :]) @ v
    return MatrixPolynomial(tuple(lower) + (lead,))


def gen_nonmonic_in_ball(center: MatrixPolynomial, radius_fraction: float, seed: int) -> MatrixPolynomial:
    """center + D with max_i ||D_i||_1 = radius_fraction / ||center_m^{-1}||_1 exactly (up to rounding)."""
    radius = radius_fraction / operator_p_norm(leading_inverse(center), 1)
    if radius_fraction == 0:
        return MatrixPolynomial(center.coeffs)
    rng = Rng(seed)
    deltas = [rng.complex_normal((center.n, center.n)) for _ in center.coeffs]
    size = max(operator_p_norm(d, 1) for d in deltas)
    return MatrixPolynomial(tuple(c + (radius / size) * d for c, d in zip(center.coeffs, deltas)))


# ---------------------------------------------------------------- perturbed partners


def perturb_unitary(u: np.ndarray, eps: float, seed: int) -> np.ndarray:
    return _unitary_from(u + eps * Rng(seed).complex_normal(u.shape))


def perturb_hermitian(h: np.ndarray, eps: float, seed: int) -> np.ndarray:
    return h + eps * _hermitize(Rng(seed).complex_normal(h.shape))


def perturb_arbitrary(a: np.ndarray, eps: float, seed: int) -> np.ndarray:
    return a + eps * Rng(seed).complex_normal(a.shape)


def gen_normal_pair(n: int, seed: int, eps: Optional[float] = None):
    """Two normal matrices; with ``eps`` the second one perturbs the first's eigen-factors."""
    if eps is None:
        return gen_normal(n, split_seed(seed, 0)), gen_normal(n, split_seed(seed, 1))
    rng = Rng(seed)
    u = _unitary_from(rng.complex_normal((n, n)))
    d = rng.complex_normal(n)
    v = _unitary_from(u + eps * rng.complex_normal((n, n)))
    e = d + eps * rng.complex_normal(n)
    return (u * d[None, :]) @ u.conj().T, (v * e[None, :]) @ v.conj().T


def perturb_monic(poly: MatrixPolynomial, eps: float, seed: int) -> MatrixPolynomial:
    rng = Rng(seed)
    return MatrixPolynomial.monic([c + eps * rng.complex_normal(c.shape) for c in poly.coeffs[:-1]])


# ---------------------------------------------------------------- declarative specs


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    m: Optional[int] = None
    seed: int = 0
    scale: float = 1.0
    a: Optional[float] = None
    b: Optional[float] = None
    radius_fraction: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.n < 1:
            raise ValueError("order n must be >= 1")
        if self.family == "hermitian-in-interval" and not (
            self.a is not None and self.b is not None and 0 < self.b <= self.a
        ):
            raise BadInterval("hermitian-in-interval needs 0 < b <= a")

    def to_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}


def generate(spec: GenSpec, center: Optional[MatrixPolynomial] = None):
    """Draw one instance; polynomial families return MatrixPolynomial, pairs a tuple of vectors."""
    f, n, m, seed = spec.family, spec.n, spec.m or 1, spec.seed
    if f == "unitary":
        return gen_unitary(n, seed)
    if f == "hermitian":
        return gen_hermitian(n, seed)
    if f == "hermitian-in-interval":
        return gen_hermitian_in_interval(n, spec.a, spec.b, seed)
    if f == "normal":
        return gen_normal(n, seed)
    if f == "arbitrary":
        return gen_arbitrary(n, seed, spec.scale)
    if f == "monic-normal-companion":
        return gen_monic_normal_companion(n, m, seed)
    if f == "monic-hermitian-companion":
        return gen_monic_hermitian_companion(n, m, seed)
    if f == "monic-arbitrary":
        return gen_monic_arbitrary(n, m, seed, spec.scale)
    if f == "nonmonic-ball":
        if center is None:
            center = gen_well_conditioned(n, m, split_seed(seed, 0), spec.scale)
        frac = 0.5 if spec.radius_fraction is None else spec.radius_fraction
        return gen_nonmonic_in_ball(center, frac, split_seed(seed, 1))
    if f == "orthonormal-pair":
        return gen_orthonormal_pair(n, seed)
    raise ValueError(f"unknown family {f!r}")
