"""Exact word metric by BFS and the shift-minimization length formula.

The Cayley graph has vertex set Sym_n and undirected edges {(t*p, p), (c*p, p)},
i.e. neighbors are obtained by left multiplication with t, c or c^-1.  The
length formula scans every cyclic shift l and combines a displacement sum with
the diameter of the mismatch set; BFS is the exact oracle it is audited
against.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import NamedTuple

import numpy as np

from .perms import (
    Permutation,
    all_permutations,
    compose,
    cycle_diam,
    cycle_dist,
    inverse,
    perm_rank,
)

__all__ = [
    "ResourceLimitError",
    "DistanceTable", "bfs_distances",
    "ShiftTerms", "FormulaBreakdown",
    "formula_length", "formula_distance",
    "sum_term_min", "diam_term_min", "split_check", "SplitCheck",
    "rank_rows", "generator_neighbors_rows", "formula_terms_batch",
]

BFS_DEGREE_GUARD = 10


class ResourceLimitError(RuntimeError):
    """Raised when an exact computation would exceed the configured budget."""


@dataclass(frozen=True)
class DistanceTable:
    """Word lengths of all of Sym_n, indexed by Lehmer rank."""

    n: int
    dist: np.ndarray  # shape (n!,), int32

    def __getitem__(self, p: Permutation) -> int:
        return int(self.dist[perm_rank(p)])

    def lookup_rank(self, rank: int) -> int:
        return int(self.dist[rank])

    def distance(self, p: Permutation, q: Permutation) -> int:
        """d(p, q) via right-invariance: the length of q * p^-1."""
        return self[compose(q, inverse(p))]


def rank_rows(perms: np.ndarray) -> np.ndarray:
    """Lehmer ranks of a batch of one-line rows, shape (m, n) -> (m,)."""
    m, n = perms.shape
    rank = np.zeros(m, dtype=np.int64)
    for i in range(n - 1):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        rank = rank * (n - i) + smaller
    return rank


def generator_neighbors_rows(perms: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rows for t*p, c*p and c^-1*p.  Left multiplication remaps values."""
    n = perms.shape[1]
    tp = perms.copy()
    zeros = tp == 0
    tp[tp == 1] = 0
    tp[zeros] = 1
    cp = (perms + 1) % n
    cinvp = (perms - 1) % n
    return tp, cp, cinvp


def bfs_distances(n: int, max_degree: int = BFS_DEGREE_GUARD) -> DistanceTable:
    """Exact shortest-path distances from the identity over all of Sym_n.

    Runs a frontier-at-a-time BFS with vectorized rank computation; n! int32
    entries are held in memory, so the degree is guarded.
    """
    if max_degree is not None and n > max_degree:
        raise ResourceLimitError(
            f"BFS over Sym_{n} needs {factorial(n):,} table entries; "
            f"the guard allows degree <= {max_degree} (force to lift it)"
        )
    size = factorial(n)
    dist = np.full(size, -1, dtype=np.int32)
    frontier = np.arange(n, dtype=np.int8).reshape(1, n)
    dist[0] = 0
    level = 0
    while frontier.size:
        candidates = np.concatenate(generator_neighbors_rows(frontier), axis=0)
        ranks = rank_rows(candidates)
        fresh = dist[ranks] == -1
        if not fresh.any():
            break
        ranks = ranks[fresh]
        candidates = candidates[fresh]
        ranks, first = np.unique(ranks, return_index=True)
        level += 1
        dist[ranks] = level
        frontier = candidates[first]
    return DistanceTable(n, dist)


class ShiftTerms(NamedTuple):
    l: int
    sum: int
    diam: int


@dataclass(frozen=True)
class FormulaBreakdown:
    """Per-shift sum and diameter terms with the minimizing shift."""

    n: int
    per_shift: tuple[ShiftTerms, ...]
    l_star: int
    value: int

    def weighted_min(self, sum_weight: int = 6, diam_weight: int = 2) -> int:
        """min over shifts of sum_weight*sum + diam_weight*diam."""
        return min(sum_weight * t.sum + diam_weight * t.diam for t in self.per_shift)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "value": self.value,
            "l_star": self.l_star,
            "per_shift": [{"l": t.l, "sum": t.sum, "diam": t.diam} for t in self.per_shift],
        }


def _breakdown(n: int, terms: list[ShiftTerms]) -> FormulaBreakdown:
    value = min(t.sum + t.diam for t in terms)
    l_star = next(t.l for t in terms if t.sum + t.diam == value)
    return FormulaBreakdown(n, tuple(terms), l_star, value)


def formula_length(p: Permutation) -> FormulaBreakdown:
    """Brute force over every shift l.

    sum(l) = sum_k d(k, p(k)+l) on the n-cycle; the diameter term covers
    {0, l} together with the points where p differs from the rotation x -> x-l.
    """
    n = p.n
    terms = []
    for l in range(n):
        s = sum(cycle_dist(n, k, (p.images[k] + l) % n) for k in range(n))
        mismatch = [q for q in range(n) if p.images[q] != (q - l) % n]
        d = cycle_diam(n, [0, l] + mismatch)
        terms.append(ShiftTerms(l, s, d))
    return _breakdown(n, terms)


def formula_distance(p: Permutation, q: Permutation) -> FormulaBreakdown:
    """Pairwise form of the length formula; equals formula_length(q * p^-1)."""
    if p.n != q.n:
        raise ValueError(f"degree mismatch: {p.n} vs {q.n}")
    n = p.n
    pinv = inverse(p).images
    qinv = inverse(q).images
    terms = []
    for l in range(n):
        s = sum(cycle_dist(n, (p.images[k] - l) % n, q.images[k]) for k in range(n))
        mismatch = [r for r in range(n) if pinv[r] != qinv[(r - l) % n]]
        d = cycle_diam(n, [0, l] + mismatch)
        terms.append(ShiftTerms(l, s, d))
    return _breakdown(n, terms)


def sum_term_min(p: Permutation, q: Permutation) -> int:
    """Min over shifts of the displacement sum alone."""
    return min(t.sum for t in formula_distance(p, q).per_shift)


def diam_term_min(p: Permutation, q: Permutation) -> int:
    """Min over shifts of the diameter term alone."""
    return min(t.diam for t in formula_distance(p, q).per_shift)


class SplitCheck(NamedTuple):
    joint_min: int
    split_bound: int
    holds: bool


def split_check(p: Permutation, q: Permutation) -> SplitCheck:
    """Check that the joint minimum is <= 2*(sum min) + (diam min)."""
    breakdown = formula_distance(p, q)
    joint = breakdown.value
    bound = 2 * min(t.sum for t in breakdown.per_shift) + min(t.diam for t in breakdown.per_shift)
    return SplitCheck(joint, bound, joint <= bound)


def formula_terms_batch(perms: np.ndarray, chunk: int = 1024) -> tuple[np.ndarray, np.ndarray]:
    """Per-shift sum and diameter terms for a batch of one-line rows.

    Returns (sums, diams), each of shape (m, n) with column l holding the
    shift-l term.  Matches formula_length exactly; used by audits and walks
    where per-permutation Python loops would dominate.
    """
    perms = np.asarray(perms, dtype=np.int64)
    m, n = perms.shape
    sums = np.zeros((m, n), dtype=np.int64)
    diams = np.zeros((m, n), dtype=np.int64)
    if n == 1:
        return sums, diams
    k_idx = np.arange(n)
    l_idx = np.arange(n)
    dist0 = np.minimum(np.arange(n), n - np.arange(n))
    half = n // 2
    v_idx = np.arange(1, half + 1)
    shifted_pos = (k_idx[None, :] + v_idx[:, None]) % n  # (half, n)
    for lo in range(0, m, chunk):
        rows = perms[lo:lo + chunk]
        # sums[l] = sum_k dist0[(p[k] + l - k) mod n]
        offsets = (rows[:, None, :] + l_idx[None, :, None] - k_idx[None, None, :]) % n
        sums[lo:lo + chunk] = dist0[offsets].sum(axis=2)
        # membership of the shift-l mismatch set, with 0 and l adjoined
        member = rows[:, None, :] != (k_idx[None, None, :] - l_idx[None, :, None]) % n
        member[:, :, 0] = True
        member[:, l_idx, l_idx] = True
        # a pair at cycle distance v exists iff member AND member-rotated-by-v overlap
        pair_at_v = member[:, :, None, :] & member[:, :, shifted_pos]
        exists = pair_at_v.any(axis=3)  # (b, n_l, half)
        diams[lo:lo + chunk] = (exists * v_idx[None, None, :]).max(axis=2)
    return sums, diams
