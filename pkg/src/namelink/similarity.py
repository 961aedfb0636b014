"""Token and name similarity: contiguous-substring ratio, atomic-token
scores, and Levenshtein distance.

The name-level scores pair tokens one-to-one (best total assignment) and
normalize so every score stays in [0, 1]. The weighted variant multiplies
each pair by 1 - |i - k| / n2, so tokens matched out of position earn
less: that positional discount is what makes the score order-sensitive.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment


def sim(a: str, b: str) -> float:
    """Longest common contiguous substring over the longer length.

    sim("farouk-like", single initial) rewards the shared prefix; a shared
    mid-name run counts the same way, which tolerates leading typos.
    """
    if not a or not b:
        return 0.0
    if a == b:
        return 1.0
    best = 0
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0] * (len(b) + 1)
        for j, cb in enumerate(b, 1):
            if ca == cb:
                v = prev[j - 1] + 1
                cur[j] = v
                if v > best:
                    best = v
        prev = cur
    return best / max(len(a), len(b))


def levenshtein(a: str, b: str) -> int:
    """Standard edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _best_assignment(weights: np.ndarray) -> tuple[float, list[tuple[int, int]]]:
    """Maximum-total one-to-one pairing of rows to columns."""
    rows, cols = linear_sum_assignment(weights, maximize=True)
    pairs = [(int(r), int(c)) for r, c in zip(rows, cols)]
    return float(weights[rows, cols].sum()), pairs


def sim_matrix(tokens_a: Sequence[str], tokens_b: Sequence[str]) -> np.ndarray:
    return np.array([[sim(a, b) for b in tokens_b] for a in tokens_a], dtype=float)


def atomic_token_from_matrix(matrix: np.ndarray) -> float:
    """Best one-to-one sim total over the longer token count."""
    if matrix.size == 0:
        return 0.0
    total, _ = _best_assignment(matrix)
    return total / max(matrix.shape)


def weighted_atomic_token_from_matrix(matrix: np.ndarray) -> float:
    score, _ = weighted_atomic_token_detail(matrix)
    return score

def weighted_atomic_token_detail(
    matrix: np.ndarray,
) -> tuple[float, list[tuple[int, int, float]]]:
    """Positionally discounted best pairing over the shorter token count.

    Returns the score plus the chosen (short index, long index, weighted sim)
    pairs, in short-side order; useful for showing reviewers which tokens
    were aligned.
    """
    if matrix.size == 0:
        return 0.0, []
    transposed = matrix.shape[0] > matrix.shape[1]
    m = matrix.T if transposed else matrix
    n1, n2 = m.shape
    pos = np.abs(np.arange(n1)[:, None] - np.arange(n2)[None, :])
    weighted = (1.0 - pos / n2) * m
    total, pairs = _best_assignment(weighted)
    detail = [
        (k, i, float(weighted[k, i])) for k, i in sorted(pairs)
    ]
    if transposed:
        detail = [(i, k, w) for k, i, w in detail]
    return total / n1, detail


def atomic_token(s1: Sequence[str], s2: Sequence[str]) -> float:
    """Atomic-token score of two token lists (order-insensitive pairing)."""
    return atomic_token_from_matrix(sim_matrix(s1, s2))


def weighted_atomic_token(s1: Sequence[str], s2: Sequence[str]) -> float:
    """Order-sensitive atomic-token score of two token lists."""
    return weighted_atomic_token_from_matrix(sim_matrix(s1, s2))
