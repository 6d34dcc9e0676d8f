"""Isometry testing and isometry-invariant keys for Gram forms."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import RankMismatch
from .forms import FormLike, GramForm, as_gram, reduce_gram, short_vectors, value_counts


def theta_window(G: FormLike, start: int, length: int) -> tuple[int, ...]:
    """Half representation numbers r(m)/2 for start <= m < start + length."""
    counts, _ = value_counts(G, start + length - 1)
    return tuple(int(c) for c in counts[start:start + length])


def canonical_key(A: FormLike, T: int = 32) -> tuple:
    """(rank, det, minimum, r(min), ..., r(min + T - 1)).

    Equal for isometric forms; unequal keys prove non-isometry.  The converse
    only holds with high probability, so equal keys must be confirmed with
    :func:`is_isometric`.
    """
    return _reduced_key(reduce_gram(A), T)


def _reduced_key(G: GramForm, T: int) -> tuple:
    # the minimum is at most the smallest diagonal entry, so one walk suffices
    top = min(G.diagonal_entries) + T - 1
    counts, _ = value_counts(G, top)
    mu = int(np.flatnonzero(counts)[0])
    return (G.dim, G.det, mu) + tuple(int(c) for c in counts[mu:mu + T])


def find_isometry(A: FormLike, B: FormLike) -> Optional[np.ndarray]:
    """Integer matrix V with V^T A V = B, or None if the forms are not isometric.

    Backtracks over images of B's basis vectors among A's vectors with the
    matching norm, checking inner products against previously placed images.
    det(V)^2 = det(B)/det(A) = 1 then forces V to be unimodular.
    """
    A, B = as_gram(A), as_gram(B)
    if A.dim != B.dim:
        raise RankMismatch(f"ranks differ: {A.dim} vs {B.dim}")
    if A.det != B.det:
        return None
    k = A.dim
    Bm = B.entries
    rows = short_vectors(A, max(B.diagonal_entries))
    half = len(rows)
    vecs = np.concatenate([rows[:, :k], -rows[:, :k]]) if half else np.zeros((0, k), np.int64)
    norms = np.concatenate([rows[:, k], rows[:, k]]) if half else np.zeros(0, np.int64)
    AV = vecs @ A.matrix
    by_norm = {}
    for q in set(Bm[i][i] for i in range(k)):
        by_norm[q] = np.flatnonzero(norms == q)
    if any(len(v) == 0 for v in by_norm.values()):
        return None

    chosen: list[int] = []

    def extend(i: int) -> bool:
        if i == k:
            return True
        cand = by_norm[Bm[i][i]]
        if i == 0:
            # x -> -x is always an isometry, so the first image may be taken up to sign
            cand = cand[cand < half]
        for j, c in enumerate(chosen):
            if len(cand) == 0:
                return False
            cand = cand[AV[cand] @ vecs[c] == Bm[i][j]]
        for c in cand:
            chosen.append(int(c))
            if extend(i + 1):
                return True
            chosen.pop()
        return False

    if not extend(0):
        return None
    V = vecs[chosen].T.copy()
    assert (V.T @ A.matrix @ V == B.matrix).all()
    return V


def is_isometric(A: FormLike, B: FormLike) -> bool:
    """True iff some unimodular integer change of basis carries A to B."""
    A, B = as_gram(A), as_gram(B)
    if A.dim != B.dim:
        raise RankMismatch(f"ranks differ: {A.dim} vs {B.dim}")
    if A == B:
        return True
    if A.det != B.det:
        return False
    Ar, Br = reduce_gram(A), reduce_gram(B)
    if Ar == Br:
        return True
    h = max(Br.diagonal_entries)
    ca, _ = value_counts(Ar, h)
    cb, _ = value_counts(Br, h)
    if not np.array_equal(ca, cb):
        return False
    return find_isometry(Ar, Br) is not None


class IsometryClasses:
    """Incremental deduplication of forms up to isometry.

    Forms are bucketed by :func:`canonical_key`; inside a bucket each new form
    is compared against the stored representatives with :func:`is_isometric`.
    """

    def __init__(self, T: int = 32):
        self.T = T
        self.buckets: dict[tuple, list[GramForm]] = {}
        self._seen: dict[GramForm, GramForm] = {}

    def add(self, G: FormLike) -> tuple[GramForm, bool]:
        """Insert a form; return (class representative, whether it is new)."""
        G = reduce_gram(G)
        if G in self._seen:
            return self._seen[G], False
        key = _reduced_key(G, self.T)
        reps = self.buckets.setdefault(key, [])
        for R in reps:
            # equal keys already match rank, det and the low theta coefficients
            if R == G or find_isometry(R, G) is not None:
                self._seen[G] = R
                return R, False
        reps.append(G)
        self._seen[G] = G
        return G, True

    def representatives(self) -> list[GramForm]:
        out = []
        for key in sorted(self.buckets):
            out.extend(sorted(self.buckets[key], key=lambda g: g.entries))
        return out

    def __len__(self):
        return sum(len(v) for v in self.buckets.values())
