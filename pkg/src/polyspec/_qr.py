"""Compiled kernels for the eigenvalue path: balancing, Hessenberg, shifted QR."""
import math

import numpy as np
from numba import njit

# golden angle; drives the deterministic phase of exceptional shifts
_PHASE_STEP = 2.399963229728653


@njit(cache=True)
def balance_inplace(h):
    n = h.shape[0]
    radix = 2.0
    done = False
    while not done:
        done = True
        for i in range(n):
            col = 0.0
            row = 0.0
            for j in range(n):
                if j != i:
                    col += abs(h[j, i])
                    row += abs(h[i, j])
            if col == 0.0 or row == 0.0:
                continue
            total = col + row
            f = 1.0
            g = row / radix
            while col < g:
                f *= radix
                col *= radix * radix
            g = row * radix
            while col > g:
                f /= radix
                col /= radix * radix
            if (col + row) / f < 0.95 * total:
                done = False
                for j in range(n):
                    h[i, j] /= f
                    h[j, i] *= f


@njit(cache=True)
def hessenberg_inplace(h):
    n = h.shape[0]
    v = np.empty(n, dtype=np.complex128)
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            alpha += h[i, k].real ** 2 + h[i, k].imag ** 2
        alpha = math.sqrt(alpha)
        if alpha == 0.0:
            continue
        x0 = h[k + 1, k]
        phase = x0 / abs(x0) if x0 != 0 else 1.0 + 0.0j
        m = n - k - 1
        for i in range(m):
            v[i] = h[k + 1 + i, k]
        v[0] += phase * alpha
        vn = 0.0
        for i in range(m):
            vn += v[i].real ** 2 + v[i].imag ** 2
        vn = math.sqrt(vn)
        for i in range(m):
            v[i] /= vn
        # left: rows k+1.., columns k..
        for j in range(k, n):
            s = 0j
            for i in range(m):
                s += v[i].conjugate() * h[k + 1 + i, j]
            s *= 2.0
            for i in range(m):
                h[k + 1 + i, j] -= v[i] * s
        # right: all rows, columns k+1..
        for r in range(n):
            s = 0j
            for i in range(m):
                s += h[r, k + 1 + i] * v[i]
            s *= 2.0
            for i in range(m):
                h[r, k + 1 + i] -= s * v[i].conjugate()
        for i in range(k + 2, n):
            h[i, k] = 0j


@njit(cache=True)
def _wilkinson(a, b, c, d):
    half = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    l1 = half + disc
    l2 = half - disc
    if abs(l1 - d) <= abs(l2 - d):
        return l1
    return l2


@njit(cache=True)
def qr_eigenvalues(h, deflation_eps, max_iter, exceptional_every):
    """Implicit single-shift complex QR, eigenvalues only; h is overwritten.

    Returns (eigenvalues, iterations, converged); unconverged slots are NaN.
    """
    n = h.shape[0]
    lam = np.full(n, np.nan + 0j)
    total = 0
    stalled = 0
    hi = n - 1
    while hi >= 0:
        if hi == 0:
            lam[0] = h[0, 0]
            break
        lo = 0
        for k in range(hi, 0, -1):
            scale = abs(h[k - 1, k - 1]) + abs(h[k, k])
            if scale == 0.0:
                for i in range(hi + 1):
                    for j in range(hi + 1):
                        scale = max(scale, abs(h[i, j]))
            if abs(h[k, k - 1]) <= deflation_eps * scale:
                h[k, k - 1] = 0j
                lo = k
                break
        if lo == hi:
            lam[hi] = h[hi, hi]
            hi -= 1
            stalled = 0
            continue
        if total >= max_iter:
            return lam, total, False
        total += 1
        stalled += 1
        if stalled % exceptional_every == 0:
            ang = _PHASE_STEP * stalled
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1]) * complex(math.cos(ang), math.sin(ang))
        else:
            mu = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        x = h[lo, lo] - mu
        y = h[lo + 1, lo]
        for k in range(lo, hi):
            # Givens (c real, s complex) zeroing y against x
            if y == 0:
                c = 1.0
                s = 0j
            elif x == 0:
                c = 0.0
                s = 1.0 + 0j
            else:
                ax = abs(x)
                nrm = math.hypot(ax, abs(y))
                c = ax / nrm
                s = (x / ax) * y.conjugate() / nrm
            sc = s.conjugate()
            c0 = lo if k == lo else k - 1
            for j in range(c0, hi + 1):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = c * t1 + s * t2
                h[k + 1, j] = -sc * t1 + c * t2
            r1 = min(k + 2, hi)
            for i in range(lo, r1 + 1):
                t1 = h[i, k]
                t2 = h[i, k + 1]
                h[i, k] = c * t1 + sc * t2
                h[i, k + 1] = -s * t1 + c * t2
            if k > lo:
                h[k + 1, k - 1] = 0j
            if k < hi - 1:
                x = h[k + 1, k]
                y = h[k + 2, k]
    return lam, total, True
