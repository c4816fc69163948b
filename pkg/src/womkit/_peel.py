"""Compiled peeling kernels.

Two distinct message-passing passes live here: the erasure *quantizer*
(solve for a generator-row label so the codeword matches every known
position) and the erasure *decoder* (fill erased positions from checks
with one erased neighbor).  They share only the low-level heap helpers;
the schedules and value updates are deliberately independent
implementations.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _heap_push(heap, size, v):
    heap[size] = v
    i = size
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= heap[i]:
            break
        heap[parent], heap[i] = heap[i], heap[parent]
        i = parent
    return size + 1


@njit(cache=True, inline="always")
def _heap_pop(heap, size):
    top = heap[0]
    size -= 1
    heap[0] = heap[size]
    i = 0
    while True:
        l = 2 * i + 1
        if l >= size:
            break
        r = l + 1
        c = l
        if r < size and heap[r] < heap[l]:
            c = r
        if heap[i] <= heap[c]:
            break
        heap[i], heap[c] = heap[c], heap[i]
        i = c
    return top, size


@njit(cache=True, nogil=True)
def quantize_kernel(row_ptr, row_cols, col_ptr, col_rows, known, vals):
    """Peel + back-substitute a label u with (u @ G)_j = vals_j wherever known.

    ``known`` is a uint8 mask (1 = position must be matched); it is consumed.
    Returns (ok, u): ok = 0 means the schedule stalled with known positions
    left, which is the domain-level Failure.
    """
    nrows = row_ptr.shape[0] - 1
    u = np.zeros(nrows, dtype=np.uint8)
    cnt = np.zeros(nrows, dtype=np.int64)
    remaining = 0
    for j in range(known.shape[0]):
        if known[j]:
            remaining += 1
            for t in range(col_ptr[j], col_ptr[j + 1]):
                cnt[col_rows[t]] += 1
    heap = np.empty(nrows + 1, dtype=np.int64)
    hsize = 0
    for i in range(nrows):
        if cnt[i] == 1:
            hsize = _heap_push(heap, hsize, i)
    stack_i = np.empty(known.shape[0], dtype=np.int64)
    stack_j = np.empty(known.shape[0], dtype=np.int64)
    top = 0
    while hsize > 0:
        i, hsize = _heap_pop(heap, hsize)
        if cnt[i] != 1:
            continue
        j = -1
        for t in range(row_ptr[i], row_ptr[i + 1]):
            if known[row_cols[t]]:
                j = row_cols[t]
                break
        stack_i[top] = i
        stack_j[top] = j
        top += 1
        known[j] = 0
        remaining -= 1
        for t in range(col_ptr[j], col_ptr[j + 1]):
            r = col_rows[t]
            cnt[r] -= 1
            if cnt[r] == 1:
                hsize = _heap_push(heap, hsize, r)
    if remaining > 0:
        return 0, u
    # Back-substitution in reverse peel order: u_i := s'_j + sum of u over
    # the other rows incident to column j (u_i itself is still zero).
    for t in range(top - 1, -1, -1):
        i = stack_i[t]
        j = stack_j[t]
        acc = vals[j]
        for s in range(col_ptr[j], col_ptr[j + 1]):
            acc ^= u[col_rows[s]]
        u[i] = acc
    return 1, u


@njit(cache=True, nogil=True)
def erasure_decode_kernel(row_ptr, row_cols, col_ptr, col_rows, erased, vals):
    """Classic peeling: solve checks with exactly one erased neighbor.

    ``erased`` (uint8 mask) and ``vals`` are consumed/filled in place on a
    copy owned by the caller.  Returns (ok, vals); ok = 0 on a stall.
    """
    nrows = row_ptr.shape[0] - 1
    cnt = np.zeros(nrows, dtype=np.int64)
    remaining = 0
    for j in range(erased.shape[0]):
        if erased[j]:
            remaining += 1
            for t in range(col_ptr[j], col_ptr[j + 1]):
                cnt[col_rows[t]] += 1
    heap = np.empty(nrows + 1, dtype=np.int64)
    hsize = 0
    for i in range(nrows):
        if cnt[i] == 1:
            hsize = _heap_push(heap, hsize, i)
    while hsize > 0:
        i, hsize = _heap_pop(heap, hsize)
        if cnt[i] != 1:
            continue
        j = -1
        acc = np.uint8(0)
        for t in range(row_ptr[i], row_ptr[i + 1]):
            c = row_cols[t]
            if erased[c]:
                j = c
            else:
                acc ^= vals[c]
        vals[j] = acc
        erased[j] = 0
        remaining -= 1
        for t in range(col_ptr[j], col_ptr[j + 1]):
            r = col_rows[t]
            cnt[r] -= 1
            if cnt[r] == 1:
                hsize = _heap_push(heap, hsize, r)
    return (1 if remaining == 0 else 0), vals
