"""Positive-definite integral quadratic forms and exact representation sets.

A form is stored through its Gram matrix ``A`` and evaluated as
Q(x) = x^T A x, so the displayed matrices of the literature are consumed
verbatim.  Odd lattices are allowed; evenness is never assumed.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import _kernels
from .errors import BoundTooLarge, NonSymmetric, NotPositiveDefinite

DEFAULT_BUDGET = 10**9


# ----------------------------------------------------------------------------
# exact linear algebra


def _as_rows(entries) -> tuple[tuple[int, ...], ...]:
    if isinstance(entries, np.ndarray):
        entries = entries.tolist()
    rows = tuple(tuple(map(int, row)) for row in entries)
    k = len(rows)
    if k == 0 or any(len(r) != k for r in rows):
        raise NonSymmetric("Gram matrix must be square and nonempty")
    return rows


def leading_minors(rows: Sequence[Sequence[int]]) -> list[int]:
    """All leading principal minors, by fraction-free elimination."""
    k = len(rows)
    M = [list(r) for r in rows]
    minors = []
    prev = 1
    for p in range(k):
        piv = M[p][p]
        minors.append(piv)
        if piv == 0:
            # remaining minors undefined by this elimination order; signal with zeros
            minors.extend([0] * (k - p - 1))
            return minors
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                M[i][j] = (M[i][j] * piv - M[i][p] * M[p][j]) // prev
        prev = piv
    return minors


def is_symmetric(rows) -> bool:
    k = len(rows)
    return all(rows[i][j] == rows[j][i] for i in range(k) for j in range(i + 1, k))


def is_positive_definite(A) -> bool:
    """True iff every leading principal minor of the symmetric matrix is positive."""
    rows = _as_rows(A.entries if isinstance(A, (GramForm, DiagonalForm)) else A)
    if not is_symmetric(rows):
        raise NonSymmetric("matrix is not symmetric")
    return all(m > 0 for m in leading_minors(rows))


def ldl(rows) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact A = U^T diag(d) U with U unit upper triangular."""
    k = len(rows)
    W = [[Fraction(v) for v in r] for r in rows]
    U = [[Fraction(0)] * k for _ in range(k)]
    d = [Fraction(0)] * k
    for p in range(k):
        d[p] = W[p][p]
        if d[p] <= 0:
            raise NotPositiveDefinite("nonpositive pivot in LDL^T")
        U[p][p] = Fraction(1)
        for j in range(p + 1, k):
            U[p][j] = W[p][j] / d[p]
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                W[i][j] -= U[p][i] * d[p] * U[p][j]
    return U, d


def determinant(rows) -> int:
    return leading_minors(rows)[-1]


# ----------------------------------------------------------------------------
# form types


class GramForm:
    """Symmetric positive-definite integer Gram matrix, immutable and hashable."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries, *, check: bool = True):
        rows = _as_rows(entries)
        if check:
            if not is_symmetric(rows):
                raise NonSymmetric(f"Gram matrix {rows} is not symmetric")
            if not all(m > 0 for m in leading_minors(rows)):
                raise NotPositiveDefinite(f"Gram matrix {rows} is not positive definite")
        self.entries = rows
        self._hash = hash(rows)

    @classmethod
    def diagonal(cls, coeffs: Iterable[int]) -> "GramForm":
        coeffs = [int(c) for c in coeffs]
        k = len(coeffs)
        return cls([[coeffs[i] if i == j else 0 for j in range(k)] for i in range(k)])

    @property
    def dim(self) -> int:
        return len(self.entries)

    rank = dim

    @property
    def det(self) -> int:
        return determinant(self.entries)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    @property
    def diagonal_entries(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(self.dim))

    def is_diagonal(self) -> bool:
        k = self.dim
        return all(self.entries[i][j] == 0 for i in range(k) for j in range(k) if i != j)

    def value(self, x: Sequence[int]) -> int:
        k = self.dim
        return sum(self.entries[i][j] * x[i] * x[j] for i in range(k) for j in range(k))

    def row_major(self) -> list[int]:
        return [v for row in self.entries for v in row]

    def __eq__(self, other):
        return isinstance(other, GramForm) and self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.is_diagonal():
            return "GramForm.diagonal(%s)" % (list(self.diagonal_entries),)
        return "GramForm(%s)" % ([list(r) for r in self.entries],)


@dataclass(frozen=True, order=True)
class DiagonalForm:
    """Diagonal form <a_1, ..., a_k> with a_1 <= ... <= a_k."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if not cs:
            raise ValueError("a diagonal form needs at least one coefficient")
        if any(c < 1 for c in cs):
            raise NotPositiveDefinite(f"coefficients must be positive: {cs}")
        if any(a > b for a, b in zip(cs, cs[1:])):
            raise ValueError(f"coefficients must be nondecreasing: {cs}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def of(cls, *coeffs: int) -> "DiagonalForm":
        if len(coeffs) == 1 and not isinstance(coeffs[0], int):
            coeffs = tuple(coeffs[0])
        return cls(tuple(sorted(coeffs)))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    rank = dim

    @property
    def entries(self):
        return self.to_gram().entries

    def to_gram(self) -> GramForm:
        return GramForm.diagonal(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __str__(self):
        return "<" + ",".join(map(str, self.coeffs)) + ">"


FormLike = Union[GramForm, DiagonalForm, Sequence[Sequence[int]], np.ndarray]


def as_gram(f: FormLike) -> GramForm:
    if isinstance(f, GramForm):
        return f
    if isinstance(f, DiagonalForm):
        return f.to_gram()
    return GramForm(f)


@dataclass(frozen=True)
class RepresentationWitness:
    vector: tuple[int, ...]
    value: int


@dataclass(frozen=True)
class TruantResult:
    """Smallest integer in [base, cap] missed by a form, if any.

    ``truant is None`` plays the role of AllRepresentedUpTo(cap).
    """

    base: int
    cap: int
    truant: Optional[int]

    @property
    def all_represented(self) -> bool:
        return self.truant is None

    def __str__(self):
        if self.truant is None:
            return f"AllRepresentedUpTo({self.cap})"
        return f"Truant({self.truant})"


# ----------------------------------------------------------------------------
# reduction and block structure


def reduce_gram(G: FormLike) -> GramForm:
    """Greedy pairwise size reduction followed by sorting the basis by norm.

    Produces an isometric Gram matrix with small diagonal entries; used to
    speed up enumeration and to make isometric forms often coincide.
    """
    A = [list(r) for r in as_gram(G).entries]
    k = len(A)
    changed = True
    while changed:
        changed = False
        order = sorted(range(k), key=lambda i: A[i][i])
        A = [[A[i][j] for j in order] for i in order]
        for i in range(k):
            for j in range(k):
                # strict inequality guarantees the norm of b_i drops
                if i == j or A[j][j] > A[i][i] or 2 * abs(A[i][j]) <= A[j][j]:
                    continue
                q = _round_div(A[i][j], A[j][j])
                aii = A[i][i] - 2 * q * A[i][j] + q * q * A[j][j]
                for l in range(k):
                    if l != i:
                        A[i][l] -= q * A[j][l]
                        A[l][i] = A[i][l]
                A[i][i] = aii
                changed = True
    return GramForm(A, check=False)


def _round_div(a: int, b: int) -> int:
    return (2 * a + b) // (2 * b)


def blocks(G: GramForm) -> list[list[int]]:
    """Index sets of the orthogonal components of a Gram matrix."""
    k = G.dim
    seen = [False] * k
    comps = []
    for s in range(k):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(k):
                if not seen[j] and G.entries[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def sub_gram(G: GramForm, idx: Sequence[int]) -> GramForm:
    return GramForm([[G.entries[i][j] for j in idx] for i in idx], check=False)


def orthogonal_sum(A: FormLike, B: FormLike) -> GramForm:
    """Block-diagonal Gram matrix A ⊥ B."""
    A, B = as_gram(A), as_gram(B)
    a, b = A.dim, B.dim
    rows = [list(r) + [0] * b for r in A.entries] + [[0] * a + list(r) for r in B.entries]
    return GramForm(rows, check=False)


# ----------------------------------------------------------------------------
# enumeration plumbing


@lru_cache(maxsize=4096)
def _factors(entries) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    A = np.array(entries, dtype=np.int64)
    k = len(entries)
    top = int(np.abs(A).max())
    if k <= 16 and top < 2**26:
        Uf, df = np.zeros((k, k)), np.zeros(k)
        _kernels._float_ldl(A, k, Uf, df)
        # well-conditioned pivots keep float error far below the kernels' slack
        if df.min() > 1e-4 * top:
            return A, Uf, df
    U, d = ldl(entries)
    Uf = np.array([[float(v) for v in r] for r in U])
    df = np.array([float(v) for v in d])
    return A, Uf, df


def _reversed(entries):
    k = len(entries)
    return tuple(tuple(entries[k - 1 - i][k - 1 - j] for j in range(k)) for i in range(k))


def value_counts(G: FormLike, hi: int, *, lo: int = 1, stop_when_covered: bool = False,
                 budget: Optional[int] = None) -> tuple[np.ndarray, bool]:
    """Half representation counts r(m)/2 for m <= hi, plus a completeness flag.

    With ``stop_when_covered`` the walk may stop early once every value in
    [lo, hi] is attained; the returned flag is False in that case and the
    counts are then lower bounds.
    """
    G = as_gram(G)
    budget = DEFAULT_BUDGET if budget is None else budget
    counts = np.zeros(hi + 1, dtype=np.int64)
    if hi < 1:
        return counts, True
    A, U, d = _factors(G.entries)
    status, _ = _kernels.count_values(A, U, d, hi, max(lo, 1), counts,
                                      stop_when_covered, budget)
    if status == 2:
        raise BoundTooLarge(budget)
    return counts, status == 0


def theta_series(G: FormLike, hi: int, budget: Optional[int] = None) -> list[int]:
    """Representation numbers r(0), ..., r(hi)."""
    counts, _ = value_counts(reduce_gram(G), hi, budget=budget)
    r = [int(2 * c) for c in counts]
    r[0] = 1
    return r


def _square_mask(a: int, hi: int) -> np.ndarray:
    mask = np.zeros(hi + 1, dtype=bool)
    x = 0
    while a * x * x <= hi:
        mask[a * x * x] = True
        x += 1
    return mask


def sumset(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    """{a + b} for boolean value masks of equal length (both contain 0)."""
    if m1.sum() > m2.sum():
        m1, m2 = m2, m1
    L = len(m1)
    out = np.zeros(L, dtype=bool)
    for v in np.flatnonzero(m1):
        out[v:] |= m2[: L - v]
    return out


def extend_diagonal_mask(mask: np.ndarray, a: int) -> np.ndarray:
    """Values of f ⊥ <a> given the 0-inclusive value mask of f."""
    out = mask.copy()
    L = len(mask)
    x = 1
    while a * x * x < L:
        v = a * x * x
        out[v:] |= mask[: L - v]
        x += 1
    return out


def diagonal_mask(coeffs: Iterable[int], hi: int) -> np.ndarray:
    mask = np.zeros(hi + 1, dtype=bool)
    mask[0] = True
    for a in coeffs:
        mask = extend_diagonal_mask(mask, a)
    return mask


def value_mask(G: FormLike, hi: int, *, lo: int = 1, budget: Optional[int] = None) -> np.ndarray:
    """Boolean mask of Q(G) ∪ {0} on [0, hi], exact on [lo, hi].

    Orthogonal components are enumerated separately and combined by sumset;
    a single dense component may stop early once [lo, hi] is covered.
    """
    G = as_gram(G)
    comps = blocks(G)
    if len(comps) == 1 and G.dim > 1:
        counts, _ = value_counts(reduce_gram(G), hi, lo=lo, stop_when_covered=True, budget=budget)
        mask = counts > 0
        mask[0] = True
        return mask
    diag = [G.entries[c[0]][c[0]] for c in comps if len(c) == 1]
    mask = diagonal_mask(sorted(diag), hi)
    for c in comps:
        if len(c) > 1:
            counts, _ = value_counts(reduce_gram(sub_gram(G, c)), hi, budget=budget)
            m = counts > 0
            m[0] = True
            mask = sumset(mask, m)
    return mask


# ----------------------------------------------------------------------------
# public operations


def represented_set(A: FormLike, lo: int, hi: int, *, budget: Optional[int] = None) -> set[int]:
    """Q(A) ∩ [lo, hi] by exhaustive enumeration."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    mask = value_mask(A, hi, lo=lo, budget=budget)
    lo = max(lo, 1)
    return {int(v) for v in np.flatnonzero(mask[lo:]) + lo}


def represents(A: FormLike, m: int, *, budget: Optional[int] = None) -> Optional[RepresentationWitness]:
    """A witness x with x^T A x = m, or None.

    The witness is the lexicographically greatest solution (equivalently the
    negation of the least one), so its first nonzero coordinate is positive.
    """
    G = as_gram(A)
    if m < 1:
        raise ValueError("m must be positive")
    budget = DEFAULT_BUDGET if budget is None else budget
    rev = _reversed(G.entries)
    _, U, d = _factors(rev)
    out = np.zeros(G.dim, dtype=np.int64)
    found, _, status = _kernels.first_witness(np.array(G.entries, dtype=np.int64), U, d, m, out, budget)
    if status == 2:
        raise BoundTooLarge(budget)
    if not found:
        return None
    vec = tuple(int(-v) for v in out)
    assert G.value(vec) == m
    return RepresentationWitness(vec, m)


def truant(A: FormLike, n: int, cap: int, *, budget: Optional[int] = None) -> TruantResult:
    """Smallest m in [n, cap] not represented, searched on geometrically growing windows."""
    if n > cap:
        raise ValueError("need n <= cap")
    G = as_gram(A)
    h = min(cap, max(n + 16, 4 * max(G.diagonal_entries)))
    while True:
        mask = value_mask(G, h, lo=n, budget=budget)
        missing = np.flatnonzero(~mask[n: h + 1])
        if len(missing):
            return TruantResult(n, cap, int(missing[0]) + n)
        if h >= cap:
            return TruantResult(n, cap, None)
        h = min(cap, 4 * h)


def minimum(A: FormLike, *, budget: Optional[int] = None) -> int:
    """min Q(x) over nonzero integer vectors."""
    G = reduce_gram(A)
    h = min(G.diagonal_entries)
    counts, _ = value_counts(G, h, budget=budget)
    return int(np.flatnonzero(counts)[0])


def short_vectors(A: FormLike, hi: int, *, budget: Optional[int] = None) -> np.ndarray:
    """Rows (x_1, ..., x_k, Q(x)) for one vector of every +-pair with 0 < Q <= hi."""
    G = as_gram(A)
    budget = DEFAULT_BUDGET if budget is None else budget
    Ai, U, d = _factors(G.entries)
    cap = 1024
    while True:
        out = np.zeros((cap, G.dim + 1), dtype=np.int64)
        count, _, status = _kernels.collect_vectors(Ai, U, d, hi, out, budget)
        if status == 2:
            raise BoundTooLarge(budget)
        if count <= cap:
            return out[:count]
        cap = count
