"""Brute-force reference implementations, deliberately naive."""

import itertools
import math

import numpy as np


def _radius(A, hi):
    lam = float(np.linalg.eigvalsh(np.array(A, dtype=float)).min())
    return int(math.isqrt(int(hi / lam)) + 2)


def values_upto(A, hi):
    """{Q(x) : x != 0, Q(x) <= hi} by scanning a cube that contains the ellipsoid."""
    A = np.array(A, dtype=np.int64)
    k = len(A)
    r = _radius(A, hi)
    out = set()
    for x in itertools.product(range(-r, r + 1), repeat=k):
        v = np.array(x)
        q = int(v @ A @ v)
        if 0 < q <= hi:
            out.add(q)
    return out


def counts_upto(A, hi):
    """r(m) for 0 <= m <= hi."""
    A = np.array(A, dtype=np.int64)
    k = len(A)
    r = _radius(A, hi)
    c = [0] * (hi + 1)
    for x in itertools.product(range(-r, r + 1), repeat=k):
        v = np.array(x)
        q = int(v @ A @ v)
        if q <= hi:
            c[q] += 1
    return c


def diag_values_upto(coeffs, hi):
    ranges = [range(0, math.isqrt(hi // a) + 1) for a in coeffs]
    out = set()
    for x in itertools.product(*ranges):
        q = sum(a * t * t for a, t in zip(coeffs, x))
        if 0 < q <= hi:
            out.add(q)
    return out


def diag_solutions(coeffs, m):
    r = math.isqrt(m)
    return [x for x in itertools.product(range(-r, r + 1), repeat=len(coeffs))
            if sum(a * t * t for a, t in zip(coeffs, x)) == m]


def random_unimodular(k, rng, steps=12):
    U = np.eye(k, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(k, size=2, replace=False)
        U[:, i] += int(rng.integers(-2, 3)) * U[:, j]
    if rng.integers(2):
        p = rng.permutation(k)
        U = U[:, p]
    return U


def coset_classes_upto(A, hi):
    """Nonzero parity classes mod 2L met by some x with Q(x) <= hi."""
    A = np.array(A, dtype=np.int64)
    k = len(A)
    r = _radius(A, hi)
    out = set()
    for x in itertools.product(range(-r, r + 1), repeat=k):
        v = np.array(x)
        if 0 < int(v @ A @ v) <= hi and any(c % 2 for c in x):
            out.add(tuple(c % 2 for c in x))
    return out
