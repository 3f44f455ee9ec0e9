"""Distances between spectra: bottleneck and Frobenius (sum-of-squares) matching."""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import OracleSizeExceeded, SizeMismatch

BOTTLENECK = "bottleneck"
FROBENIUS = "sum-of-squares"
BRUTE_FORCE_MAX = 8


@dataclass(frozen=True)
class MatchingResult:
    distance: float
    permutation: tuple  # S[i] is paired with T[permutation[i]]
    method: str

    def to_dict(self):
        return {"distance": self.distance, "permutation": list(self.permutation), "method": self.method}


def _spectra(s, t):
    s = np.asarray(s, dtype=np.complex128).ravel()
    t = np.asarray(t, dtype=np.complex128).ravel()
    if s.size != t.size:
        raise SizeMismatch(f"spectra differ in size: {s.size} vs {t.size}")
    if s.size == 0:
        raise SizeMismatch("spectra must be nonempty")
    return s, t


def cost_matrix(s, t) -> np.ndarray:
    """|s_i - t_j| for all pairs."""
    return np.abs(s[:, None] - t[None, :])


def squared_cost_matrix(s, t) -> np.ndarray:
    d = s[:, None] - t[None, :]
    return d.real * d.real + d.imag * d.imag


def objective(s, t, permutation, method: str) -> float:
    """Value of a given pairing; the certificate check for any MatchingResult."""
    s, t = _spectra(s, t)
    rows, cols = np.arange(s.size), list(permutation)
    if method == BOTTLENECK:
        return float(cost_matrix(s, t)[rows, cols].max())
    if method == FROBENIUS:
        return math.sqrt(math.fsum(squared_cost_matrix(s, t)[rows, cols].tolist()))
    raise ValueError(f"unknown matching method {method!r}")


def _hopcroft_karp(adj, k):
    """Maximum bipartite matching; returns match_left (left -> right or -1)."""
    match_l = [-1] * k
    match_r = [-1] * k
    dist = [0] * k
    inf = k + 1

    def bfs():
        queue = deque()
        found = False
        for u in range(k):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = inf
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u):
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = inf
        return False

    while bfs():
        for u in range(k):
            if match_l[u] == -1:
                dfs(u)
    return match_l


def _perfect_matching_below(costs, threshold):
    k = costs.shape[0]
    adj = [np.flatnonzero(costs[i] <= threshold).tolist() for i in range(k)]
    match = _hopcroft_karp(adj, k)
    return None if -1 in match else match


def optimal_matching_distance(s, t) -> MatchingResult:
    """min over permutations of max_j |s_j - t_perm(j)| (bottleneck assignment).

    Binary search over the sorted distinct pair costs; feasibility of a
    threshold is a perfect matching in the graph of pairs at or below it.
    """
    s, t = _spectra(s, t)
    costs = cost_matrix(s, t)
    levels = np.unique(costs)
    lo, hi = 0, levels.size - 1
    best = _perfect_matching_below(costs, levels[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        match = _perfect_matching_below(costs, levels[mid])
        if match is None:
            lo = mid + 1
        else:
            hi = mid
            best = match
    perm = tuple(int(j) for j in best)
    return MatchingResult(objective(s, t, perm, BOTTLENECK), perm, BOTTLENECK)


def frobenius_matching_distance(s, t) -> MatchingResult:
    """min over permutations of (sum_j |s_j - t_perm(j)|^2)^(1/2)."""
    s, t = _spectra(s, t)
    # solve in a canonical orientation so that d(S, T) and d(T, S) agree bit for bit
    swap = sorted(zip(t.real, t.imag)) < sorted(zip(s.real, s.imag))
    a, b = (t, s) if swap else (s, t)
    rows, cols = linear_sum_assignment(squared_cost_matrix(a, b))
    perm = cols[np.argsort(rows)]
    if swap:
        perm = np.argsort(perm)
    perm = tuple(int(j) for j in perm)
    return MatchingResult(objective(s, t, perm, FROBENIUS), perm, FROBENIUS)


def brute_force_matching(s, t, method: str = BOTTLENECK) -> MatchingResult:
    """Exhaustive search over all k! pairings (k <= 8)."""
    s, t = _spectra(s, t)
    k = s.size
    if k > BRUTE_FORCE_MAX:
        raise OracleSizeExceeded(f"brute force limited to k <= {BRUTE_FORCE_MAX}, got {k}")
    costs = cost_matrix(s, t)
    sq = squared_cost_matrix(s, t)
    best_val, best_perm = math.inf, None
    rows = range(k)
    for perm in itertools.permutations(range(k)):
        if method == BOTTLENECK:
            val = max(costs[i, perm[i]] for i in rows)
        elif method == FROBENIUS:
            val = math.fsum(sq[i, perm[i]] for i in rows)
        else:
            raise ValueError(f"unknown matching method {method!r}")
        if val < best_val:
            best_val, best_perm = val, perm
    return MatchingResult(objective(s, t, best_perm, method), tuple(best_perm), method)


def matching_distance(s, t, method: str = BOTTLENECK) -> MatchingResult:
    if method in (BOTTLENECK, "dist"):
        return optimal_matching_distance(s, t)
    if method in (FROBENIUS, "frobenius", "dist_F"):
        return frobenius_matching_distance(s, t)
    raise ValueError(f"unknown matching method {method!r}")
