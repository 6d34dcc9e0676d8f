"""Compiled Fincke-Pohst style enumerators.

All kernels take an integer Gram matrix ``A`` together with a float copy of
its exact LDL^T factors (``U`` unit upper triangular, ``d`` pivots) so that
Q(x) = sum_i d[i] * (x[i] + sum_{j>i} U[i, j] x[j])**2.  The float factors are
only used to bound the coordinate ranges, and those ranges are widened by a
slack far above any rounding error.  The value of each visited vector is
recomputed in exact integer arithmetic, so a value is never reported unless
it is attained.

Enumeration visits one vector of every +-pair (the last nonzero coordinate
is positive).
"""

import math

import numpy as np
from numba import njit

_REL_SLACK = 1e-10
_ABS_SLACK = 1e-7


@njit(cache=True, nogil=True)
def _bounds(U, d, x, S_next, hi, i):
    k = U.shape[0]
    c = 0.0
    for j in range(i + 1, k):
        c -= U[i, j] * x[j]
    r = (hi * (1.0 + _REL_SLACK) + _ABS_SLACK - S_next) / d[i]
    if r < 0.0:
        return c, 1, 0
    rad = math.sqrt(r) + _ABS_SLACK
    return c, math.ceil(c - rad), math.floor(c + rad)


@njit(cache=True, nogil=True)
def count_values(A, U, d, hi, lo, counts, stop_when_full, budget):
    """Accumulate counts[q] for every +-pair of vectors with 0 < q <= hi.

    If ``stop_when_full`` the walk stops once every value in [lo, hi] has been
    seen.  Returns (status, nodes) with status 0 = complete, 1 = stopped with
    [lo, hi] covered, 2 = budget exhausted.
    """
    k = A.shape[0]
    x = np.zeros(k, np.int64)
    upper = np.zeros(k, np.int64)
    centre = np.zeros(k)
    S = np.zeros(k + 1)
    T = np.zeros(k + 1, np.int64)
    lin = np.zeros(k, np.int64)
    allz = np.zeros(k + 1, np.bool_)
    allz[k] = True
    remaining = 0
    if stop_when_full:
        for v in range(lo, hi + 1):
            if counts[v] == 0:
                remaining += 1
        if remaining == 0:
            return 1, 0
    nodes = 0

    i = k - 1
    c, lb, ub = _bounds(U, d, x, 0.0, hi, i)
    if lb < 0:
        lb = 0
    if i == 0 and lb == 0:
        lb = 1
    centre[i] = c
    x[i] = lb
    upper[i] = ub
    allz[i] = True
    lin[i] = 0
    while True:
        if x[i] > upper[i]:
            i += 1
            if i == k:
                break
            x[i] += 1
            continue
        nodes += 1
        if nodes > budget:
            return 2, nodes
        t = x[i] - centre[i]
        S[i] = S[i + 1] + d[i] * t * t
        T[i] = A[i, i] * x[i] * x[i] + 2 * x[i] * lin[i] + T[i + 1]
        if i == 0:
            q = T[0]
            if q > 0 and q <= hi:
                if counts[q] == 0 and stop_when_full and q >= lo:
                    remaining -= 1
                    counts[q] += 1
                    if remaining == 0:
                        return 1, nodes
                else:
                    counts[q] += 1
            x[0] += 1
            continue
        # descend
        z = allz[i] and x[i] == 0
        i -= 1
        allz[i] = z
        s = 0
        for j in range(i + 1, k):
            s += A[i, j] * x[j]
        lin[i] = s
        c, lb, ub = _bounds(U, d, x, S[i + 1], hi, i)
        if z and lb < 0:
            lb = 0
        if z and i == 0 and lb == 0:
            lb = 1
        centre[i] = c
        x[i] = lb
        upper[i] = ub
    return 0, nodes


@njit(cache=True, nogil=True)
def collect_vectors(A, U, d, hi, out, budget):
    """Write one vector of every +-pair with 0 < Q <= hi into ``out``.

    Returns (count, nodes, status); when count exceeds len(out) only the
    count is meaningful and the caller must retry with a larger buffer.
    """
    k = A.shape[0]
    cap = out.shape[0]
    x = np.zeros(k, np.int64)
    upper = np.zeros(k, np.int64)
    centre = np.zeros(k)
    S = np.zeros(k + 1)
    T = np.zeros(k + 1, np.int64)
    lin = np.zeros(k, np.int64)
    allz = np.zeros(k + 1, np.bool_)
    count = 0
    nodes = 0
    i = k - 1
    c, lb, ub = _bounds(U, d, x, 0.0, hi, i)
    if lb < 0:
        lb = 0
    if i == 0 and lb == 0:
        lb = 1
    centre[i] = c
    x[i] = lb
    upper[i] = ub
    allz[i] = True
    while True:
        if x[i] > upper[i]:
            i += 1
            if i == k:
                break
            x[i] += 1
            continue
        nodes += 1
        if nodes > budget:
            return count, nodes, 2
        t = x[i] - centre[i]
        S[i] = S[i + 1] + d[i] * t * t
        T[i] = A[i, i] * x[i] * x[i] + 2 * x[i] * lin[i] + T[i + 1]
        if i == 0:
            q = T[0]
            if q > 0 and q <= hi:
                if count < cap:
                    for j in range(k):
                        out[count, j] = x[j]
                    out[count, k] = q
                count += 1
            x[0] += 1
            continue
        z = allz[i] and x[i] == 0
        i -= 1
        allz[i] = z
        s = 0
        for j in range(i + 1, k):
            s += A[i, j] * x[j]
        lin[i] = s
        c, lb, ub = _bounds(U, d, x, S[i + 1], hi, i)
        if z and lb < 0:
            lb = 0
        if z and i == 0 and lb == 0:
            lb = 1
        centre[i] = c
        x[i] = lb
        upper[i] = ub
    return count, nodes, 0


@njit(cache=True, nogil=True)
def first_witness(A, U, d, m, out, budget):
    """Lexicographically least x (x[0] most significant) with Q(x) == m.

    ``U`` and ``d`` must factor the coordinate-reversed matrix, so the
    outermost loop runs over x[0].  Every coordinate is scanned from its
    least to its greatest admissible value.  Returns (found, nodes, status).
    """
    k = A.shape[0]
    # work in reversed coordinates y[i] = x[k-1-i]; loop over y[k-1] = x[0] first
    y = np.zeros(k, np.int64)
    upper = np.zeros(k, np.int64)
    centre = np.zeros(k)
    S = np.zeros(k + 1)
    T = np.zeros(k + 1, np.int64)
    lin = np.zeros(k, np.int64)
    nodes = 0
    i = k - 1
    c, lb, ub = _bounds(U, d, y, 0.0, m, i)
    centre[i] = c
    y[i] = lb
    upper[i] = ub
    while True:
        if y[i] > upper[i]:
            i += 1
            if i == k:
                break
            y[i] += 1
            continue
        nodes += 1
        if nodes > budget:
            return False, nodes, 2
        a = k - 1 - i
        t = y[i] - centre[i]
        S[i] = S[i + 1] + d[i] * t * t
        T[i] = A[a, a] * y[i] * y[i] + 2 * y[i] * lin[i] + T[i + 1]
        if i == 0:
            if T[0] == m:
                for j in range(k):
                    out[j] = y[k - 1 - j]
                return True, nodes, 0
            y[0] += 1
            continue
        i -= 1
        a = k - 1 - i
        s = 0
        for j in range(i + 1, k):
            s += A[a, k - 1 - j] * y[j]
        lin[i] = s
        c, lb, ub = _bounds(U, d, y, S[i + 1], m, i)
        centre[i] = c
        y[i] = lb
        upper[i] = ub
    return False, nodes, 0


@njit(cache=True, nogil=True)
def coset_minima(A, U, d, hi, minima, budget):
    """minima[mask] = least Q over vectors with x mod 2 == mask, if <= hi."""
    k = A.shape[0]
    x = np.zeros(k, np.int64)
    upper = np.zeros(k, np.int64)
    centre = np.zeros(k)
    S = np.zeros(k + 1)
    T = np.zeros(k + 1, np.int64)
    lin = np.zeros(k, np.int64)
    allz = np.zeros(k + 1, np.bool_)
    nodes = 0
    i = k - 1
    c, lb, ub = _bounds(U, d, x, 0.0, hi, i)
    if lb < 0:
        lb = 0
    if i == 0 and lb == 0:
        lb = 1
    centre[i] = c
    x[i] = lb
    upper[i] = ub
    allz[i] = True
    while True:
        if x[i] > upper[i]:
            i += 1
            if i == k:
                break
            x[i] += 1
            continue
        nodes += 1
        if nodes > budget:
            return nodes, 2
        t = x[i] - centre[i]
        S[i] = S[i + 1] + d[i] * t * t
        T[i] = A[i, i] * x[i] * x[i] + 2 * x[i] * lin[i] + T[i + 1]
        if i == 0:
            q = T[0]
            if q > 0 and q <= hi:
                mask = 0
                for j in range(k):
                    if x[j] & 1:
                        mask |= 1 << j
                if mask != 0 and (minima[mask] < 0 or q < minima[mask]):
                    minima[mask] = q
            x[0] += 1
            continue
        z = allz[i] and x[i] == 0
        i -= 1
        allz[i] = z
        s = 0
        for j in range(i + 1, k):
            s += A[i, j] * x[j]
        lin[i] = s
        c, lb, ub = _bounds(U, d, x, S[i + 1], hi, i)
        if z and lb < 0:
            lb = 0
        if z and i == 0 and lb == 0:
            lb = 1
        centre[i] = c
        x[i] = lb
        upper[i] = ub
    return nodes, 0


@njit(cache=True, nogil=True)
def _leading_minors_positive(G, k):
    # fraction-free (Bareiss) elimination; every pivot is a leading minor
    M = G.copy()
    prev = 1
    for p in range(k):
        if M[p, p] <= 0:
            return False
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                M[i, j] = (M[i, j] * M[p, p] - M[i, p] * M[p, j]) // prev
        prev = M[p, p]
    return True


@njit(cache=True, nogil=True)
def _float_ldl(G, k, U, d):
    for i in range(k):
        for j in range(k):
            U[i, j] = 0.0
    W = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            W[i, j] = G[i, j]
    for p in range(k):
        d[p] = W[p, p]
        U[p, p] = 1.0
        for j in range(p + 1, k):
            U[p, j] = W[p, j] / d[p]
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                W[i, j] -= U[p, i] * d[p] * U[p, j]


@njit(cache=True, nogil=True)
def screen_extensions(G, t, n, betas, keep, budget):
    """Mark which one-vector extensions of ``G`` survive escalation pruning.

    ``betas`` holds candidate inner-product rows.  Row r survives when the
    extended Gram matrix [[G, b], [b^T, t]] is positive definite and
    represents no integer below ``n``.  Positive definiteness is exact; the
    second test reports a value only after exact evaluation.
    """
    k = G.shape[0]
    K = k + 1
    H = np.zeros((K, K), np.int64)
    for i in range(k):
        for j in range(k):
            H[i, j] = G[i, j]
    H[k, k] = t
    U = np.zeros((K, K))
    d = np.zeros(K)
    counts = np.zeros(max(n, 1), np.int64)
    total = 0
    for r in range(betas.shape[0]):
        for i in range(k):
            H[i, k] = betas[r, i]
            H[k, i] = betas[r, i]
        if not _leading_minors_positive(H, K):
            keep[r] = False
            continue
        if n <= 1:
            keep[r] = True
            continue
        _float_ldl(H, K, U, d)
        for v in range(n):
            counts[v] = 0
        status, nodes = count_values(H, U, d, n - 1, 1, counts, False, budget)
        total += nodes
        ok = True
        for v in range(1, n):
            if counts[v] > 0:
                ok = False
                break
        keep[r] = ok
    return total
