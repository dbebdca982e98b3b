"""Pure-Python versions of the enumeration kernels.

These are the reference implementations; the compiled module ``_ckernels``
exposes the same functions with the same signatures.
"""

from __future__ import annotations

import numpy as np


def path_turn_histogram(n_free: int, target: int) -> np.ndarray:
    """Count checker paths by number of turns.

    The path starts with a fixed up-right move from ``x = 0`` and then makes
    ``n_free`` free moves; bit ``j`` of the mask set means move ``j`` goes
    right.  Only paths ending at ``x = target`` are counted.

    Returns
    -------
    numpy.ndarray
        ``counts[k]`` is the number of such paths with ``k`` turns.
    """
    counts = np.zeros(n_free + 1, dtype=np.int64)
    # x_end = 1 + (#right) - (#left) = 1 + 2*popcount - n_free
    twice = target - 1 + n_free
    if twice % 2 or not 0 <= twice // 2 <= n_free:
        return counts
    want = twice // 2
    for mask in range(1 << n_free):
        if bin(mask).count("1") != want:
            continue
        # prepend the fixed right move as bit n_free, compare neighbours
        full = mask | (1 << n_free)
        turns = bin((full ^ (full >> 1)) & ((1 << n_free) - 1)).count("1")
        counts[turns] += 1
    return counts


def balanced_subsets(
    starts: np.ndarray,
    ends: np.ndarray,
    n_points: int,
    forced: int,
    source_mask: int,
    sink_mask: int,
) -> np.ndarray:
    """Edge subsets containing ``forced`` with balanced degrees at every point.

    At each point the number of used incoming edges that are not sinks must
    equal the number of used outgoing edges that are not sources.

    Returns
    -------
    numpy.ndarray of int64
        Bitmasks of the admissible subsets in increasing order.
    """
    n_edges = len(starts)
    free = [j for j in range(n_edges) if not (forced >> j) & 1]
    out = []
    for sub in range(1 << len(free)):
        mask = forced
        for k, j in enumerate(free):
            if (sub >> k) & 1:
                mask |= 1 << j
        bal = [0] * n_points
        for j in range(n_edges):
            if (mask >> j) & 1:
                if not (sink_mask >> j) & 1:
                    bal[ends[j]] += 1
                if not (source_mask >> j) & 1:
                    bal[starts[j]] -= 1
        if not any(bal):
            out.append(mask)
    return np.array(sorted(out), dtype=np.int64)


def overlap_histogram(
    masks_a: np.ndarray,
    weights_a: np.ndarray,
    masks_b: np.ndarray,
    weights_b: np.ndarray,
    n_bits: int,
) -> np.ndarray:
    """Weighted histogram of common-edge counts over all pairs.

    ``H[k] = sum weights_a[i] * weights_b[j]`` over pairs whose masks share
    exactly ``k`` set bits.
    """
    hist = np.zeros(n_bits + 1, dtype=complex)
    for ma, wa in zip(masks_a.tolist(), weights_a.tolist()):
        for mb, wb in zip(masks_b.tolist(), weights_b.tolist()):
            hist[bin(ma & mb).count("1")] += wa * wb
    return hist
