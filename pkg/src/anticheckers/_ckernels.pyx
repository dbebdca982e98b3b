# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the enumeration kernels in ``_pykernels``."""

import numpy as np

cimport cython
from libc.stdint cimport int64_t, uint64_t


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int popcount(uint64_t v) nogil:
    return __builtin_popcountll(v)


def path_turn_histogram(int n_free, int target):
    counts = np.zeros(n_free + 1, dtype=np.int64)
    cdef int64_t[::1] c = counts
    cdef int twice = target - 1 + n_free
    if twice % 2 != 0 or twice < 0 or twice // 2 > n_free:
        return counts
    cdef int want = twice // 2
    cdef uint64_t mask, full
    cdef uint64_t low = (<uint64_t>1 << n_free) - 1
    cdef uint64_t top = <uint64_t>1 << n_free
    with nogil:
        for mask in range(top):
            if popcount(mask) != want:
                continue
            full = mask | top
            c[popcount((full ^ (full >> 1)) & low)] += 1
    return counts


def balanced_subsets(starts, ends, int n_points, int64_t forced,
                     int64_t source_mask, int64_t sink_mask):
    cdef int n_edges = len(starts)
    cdef int[::1] st = np.ascontiguousarray(starts, dtype=np.intc)
    cdef int[::1] en = np.ascontiguousarray(ends, dtype=np.intc)
    free_list = [j for j in range(n_edges) if not (forced >> j) & 1]
    cdef int n_free = len(free_list)
    cdef int[::1] free = np.array(free_list, dtype=np.intc) if n_free else np.zeros(1, dtype=np.intc)
    cdef int[::1] bal = np.zeros(max(n_points, 1), dtype=np.intc)
    cdef int64_t sub, mask
    cdef int j, k, bad
    out = []
    for sub in range(<int64_t>1 << n_free):
        mask = forced
        for k in range(n_free):
            if (sub >> k) & 1:
                mask |= (<int64_t>1) << free[k]
        for k in range(n_points):
            bal[k] = 0
        for j in range(n_edges):
            if (mask >> j) & 1:
                if not (sink_mask >> j) & 1:
                    bal[en[j]] += 1
                if not (source_mask >> j) & 1:
                    bal[st[j]] -= 1
        bad = 0
        for k in range(n_points):
            if bal[k] != 0:
                bad = 1
                break
        if not bad:
            out.append(mask)
    return np.array(sorted(out), dtype=np.int64)


def overlap_histogram(masks_a, weights_a, masks_b, weights_b, int n_bits):
    cdef int64_t[::1] ma = np.ascontiguousarray(masks_a, dtype=np.int64)
    cdef int64_t[::1] mb = np.ascontiguousarray(masks_b, dtype=np.int64)
    cdef double complex[::1] wa = np.ascontiguousarray(weights_a, dtype=complex)
    cdef double complex[::1] wb = np.ascontiguousarray(weights_b, dtype=complex)
    hist = np.zeros(n_bits + 1, dtype=complex)
    cdef double complex[::1] h = hist
    cdef Py_ssize_t i, j
    cdef double complex w
    with nogil:
        for i in range(ma.shape[0]):
            w = wa[i]
            for j in range(mb.shape[0]):
                h[popcount(<uint64_t>(ma[i] & mb[j]))] += w * wb[j]
    return hist
