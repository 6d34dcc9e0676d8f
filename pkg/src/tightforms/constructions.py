"""Explicit lattice families, the orthogonal-sum lemmas, and bounds on t(n).

t(n) is the least rank of a tight T(n)-universal lattice.  Upper bounds come
from explicit lattices checked against the sufficient conditions below;
lower bounds come from counting classes of L/2L with small minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .certificates import TightCertificate, certify_tight
from .diagonal import make_Xn, make_Yn
from .errors import BoundTooLarge, ConditionFailed, OutOfRange, RankCapExceeded, SOutOfRange
from .forms import (DEFAULT_BUDGET, DiagonalForm, FormLike, GramForm, _factors, as_gram,
                    diagonal_mask, minimum, orthogonal_sum, reduce_gram, represents,
                    sumset, value_mask)

__all__ = [
    "make_Xn", "make_Yn", "make_Kuv", "make_Luv", "fixed_Ln", "HALMOS", "BAROWSKY",
    "lemma_nnnn_check", "lemma_nn2n_check", "thm42_construct", "thm42_upper_bound",
    "lower_bound", "coset_minima", "coset_count", "BoundsReport", "bounds_table",
    "FIXED_L_ROWS", "K_ROWS", "L_ROWS", "table_rows",
]

DEFAULT_VERIFY = 10**4
COSET_RANK_CAP = 10

# 2x^2 + 2y^2 + 3z^2 + 4t^2, tight T(2)-universal
HALMOS = DiagonalForm((2, 2, 3, 4))
# tight T(3)-universal quaternary lattice
BAROWSKY = GramForm([[3, -1, -1, 1], [-1, 3, 0, -1], [-1, 0, 4, -2], [1, -1, -2, 5]])

_FIXED_L = {
    7: [[7, 0, 3, 3], [0, 7, 3, 1], [3, 3, 7, 1], [3, 1, 1, 7]],
    8: [[8, 1, 4, 3], [1, 9, 1, 4], [4, 1, 9, 0], [3, 4, 0, 9]],
    9: [[9, 3, -3, 1], [3, 9, 1, 3], [-3, 1, 10, 3], [1, 3, 3, 11]],
    10: [[10, 0, 1, 3], [0, 10, 3, 4], [1, 3, 11, -3], [3, 4, -3, 11]],
    11: [[11, -1, 1, 3], [-1, 11, 3, 4], [1, 3, 12, -4], [3, 4, -4, 12]],
    12: [[12, 1, 4, 0], [1, 13, -3, 3], [4, -3, 13, 6], [0, 3, 6, 14]],
    13: [[13, 0, 3, 4], [0, 14, 5, 5], [3, 5, 14, -3], [4, 5, -3, 15]],
    14: [[14, 2, 2, 6], [2, 15, 2, 7], [2, 2, 16, -5], [6, 7, -5, 17]],
}

# (n, s) for the fixed quaternary lattices
FIXED_L_ROWS = [(7, 7), (8, 8), (9, 9), (10, 98), (11, 124), (12, 112), (13, 80), (14, 156)]
# (n values, (u, v), s)
K_ROWS = [((15, 16), (8, 0), 49), ((17, 18), (9, 2), 57), ((19, 20), (10, 3), 96), ((21,), (11, 3), 106)]
L_ROWS = [((22,), (11, 0), 22), ((23, 24), (12, 0), 24), ((25, 26), (13, 0), 61),
          ((27, 28), (14, 1), 65), ((29, 30), (15, 1), 71), ((31, 32), (16, 2), 81),
          ((33, 34), (17, 3), 86), ((35, 36), (18, 4), 93)]


def make_Kuv(u: int, v: int) -> GramForm:
    """The quinary lattice K(u, v)."""
    first = [2 * u + v, u, u, u, u - 4]
    diag = [2 * u + 1, 2 * u + 2, 2 * u + 4, 2 * u]
    return _bordered(first, diag)


def make_Luv(u: int, v: int) -> GramForm:
    """The senary lattice L(u, v)."""
    first = [2 * u + v, u, u, u - 2, u - 4, u - 8]
    diag = [2 * u + 1, 2 * u + 2, 2 * u, 2 * u, 2 * u]
    return _bordered(first, diag)


def _bordered(first, diag) -> GramForm:
    # arrow-shaped: a full first row and column, diagonal elsewhere
    k = len(first)
    rows = [[0] * k for _ in range(k)]
    for j, v in enumerate(first):
        rows[0][j] = rows[j][0] = v
    for i, v in enumerate(diag, start=1):
        rows[i][i] = v
    return GramForm(rows)


def fixed_Ln(n: int) -> GramForm:
    if n not in _FIXED_L:
        raise OutOfRange(f"fixed lattices exist for 7 <= n <= 14, not {n}")
    return GramForm(_FIXED_L[n])


def table_rows() -> list[tuple[int, GramForm, int, str]]:
    """Every (n, lattice, s, label) row of the three construction tables."""
    rows = [(n, fixed_Ln(n), s, f"L({n})") for n, s in FIXED_L_ROWS]
    for ns, (u, v), s in K_ROWS:
        rows += [(n, make_Kuv(u, v), s, f"K({u},{v})") for n in ns]
    for ns, (u, v), s in L_ROWS:
        rows += [(n, make_Luv(u, v), s, f"L({u},{v})") for n in ns]
    return rows


# ----------------------------------------------------------------------------
# orthogonal-sum lemmas


def _check_low(L: GramForm, n: int) -> np.ndarray:
    """Shared hypotheses: min(L) in {n, n+1} and [n+1, 2n-1] inside Q(L)."""
    mu = minimum(L)
    if mu not in (n, n + 1):
        w = represents(L, mu)
        raise ConditionFailed(f"minimum {mu} not in {{{n}, {n + 1}}}", w.vector)
    mask = value_mask(L, 2 * n - 1, lo=n + 1)
    miss = np.flatnonzero(~mask[n + 1: 2 * n])
    if len(miss):
        raise ConditionFailed(f"{int(miss[0]) + n + 1} not represented in [{n + 1}, {2 * n - 1}]",
                              int(miss[0]) + n + 1)
    return mask


def _cross_check(prefix: tuple[int, ...], L: GramForm, n: int, hL: int, bound: int,
                 proved_by: str) -> TightCertificate:
    # values of L up to hL are what the lemma uses, so their sumset with the
    # prefix already covers [n, bound]; refutation falls back to exact work
    lmask = np.zeros(bound + 1, dtype=bool)
    part = value_mask(L, min(hL, bound))
    lmask[: len(part)] = part
    full = sumset(diagonal_mask(prefix, bound), lmask)
    form = orthogonal_sum(GramForm.diagonal(prefix), L)
    cert = certify_tight(form, n, bound, proved_by=proved_by, mask=full)
    return TightCertificate(n, form, bound, cert.status, proved_by, cert.missing, cert.below,
                            cert.witness, {"lattice": L, "upper": L.dim + len(prefix)})


def lemma_nnnn_check(L: FormLike, n: int, *, bound: int = DEFAULT_VERIFY) -> TightCertificate:
    """Certificate for <n,n,n,n> ⊥ L, giving t(n) <= rank(L) + 4.

    Raises :class:`ConditionFailed` naming the first violated hypothesis.
    """
    L = as_gram(L)
    _check_low(L, n)
    return _cross_check((n,) * 4, L, n, 2 * n - 1, bound, "LemmaNNNN")


def lemma_nn2n_check(L: FormLike, n: int, s: int, *, bound: int = DEFAULT_VERIFY) -> TightCertificate:
    """Certificate for <n,n,2n> ⊥ L, given [s, s+2n-1] inside Q(L) with n <= s <= 14n."""
    L = as_gram(L)
    if s > 14 * n or s < n:
        raise SOutOfRange(f"s = {s} outside [{n}, {14 * n}]")
    _check_low(L, n)
    top = s + 2 * n - 1
    mask = value_mask(L, top, lo=s)
    miss = np.flatnonzero(~mask[s: top + 1])
    if len(miss):
        raise ConditionFailed(f"{int(miss[0]) + s} not represented in [{s}, {top}]", int(miss[0]) + s)
    return _cross_check((n, n, 2 * n), L, n, top, bound, "LemmaNN2N")


# ----------------------------------------------------------------------------
# the general construction


def _sn(n: int) -> int:
    return (math.isqrt(n) - 1) // 2


def thm42_construct(n: int) -> GramForm:
    """Rank s_n + [sqrt n] + 3 lattice with minimum 2[n/2] + 1 representing [n+1, 2n-1].

    A cyclic scaled-A type lattice, semidefinite with the all-ones vector
    isotropic, glued diagonally to <1, 2, ..., 2, r, ..., r> with r = [sqrt n].
    """
    if n < 4:
        raise OutOfRange("the construction needs n >= 4")
    r = math.isqrt(n)
    s = _sn(n)
    m = s + r + 3
    h = n // 2
    y = [1] + [2] * s + [r] * (m - 1 - s)
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        rows[i][i] = 2 * h + y[i]
        for j in (i - 1, i + 1):
            rows[i][j % m] = -h
    return GramForm(rows)


def thm42_cycle_part(n: int) -> list[list[int]]:
    """The semidefinite cyclic summand on its own (rows sum to zero)."""
    r, s, h = math.isqrt(n), _sn(n), n // 2
    m = s + r + 3
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        rows[i][i] = 2 * h
        for j in (i - 1, i + 1):
            rows[i][j % m] = -h
    return rows


def thm42_upper_bound(n: int) -> int:
    if n <= 3:
        return 4
    r = math.isqrt(n)
    return _sn(n) + r + 7


def lower_bound(n: int) -> int:
    """Least k with 2^k - 1 >= n + 3, at least 4, and at least 5 for 10 <= n <= 12."""
    k = 1
    while 2**k - 1 < n + 3:
        k += 1
    k = max(k, 4)
    if 10 <= n <= 12:
        k = max(k, 5)
    return k


# ----------------------------------------------------------------------------
# cosets of L/2L


def _coset_scan(G: GramForm, hi: int, budget: int) -> np.ndarray:
    A, U, d = _factors(G.entries)
    minima = np.full(2**G.dim, -1, dtype=np.int64)
    _, status = _kernels.coset_minima(A, U, d, hi, minima, budget)
    if status == 2:
        raise BoundTooLarge(budget)
    return minima


def _check_cap(G: GramForm, rank_cap: int):
    if G.dim > rank_cap:
        raise RankCapExceeded(f"rank {G.dim} exceeds coset cap {rank_cap}")


def coset_minima(L: FormLike, *, rank_cap: int = COSET_RANK_CAP,
                 budget: int = DEFAULT_BUDGET) -> dict[tuple[int, ...], int]:
    """Minimum of Q on every nonzero class of L/2L, keyed by the parity vector.

    The search bound doubles until every class is seen; the sum of all
    |a_ij| bounds Q on 0/1 vectors, so the loop ends.
    """
    G = as_gram(L)
    _check_cap(G, rank_cap)
    k = G.dim
    ceiling = sum(abs(v) for row in G.entries for v in row)
    hi = min(ceiling, 4 * max(G.diagonal_entries))
    while True:
        minima = _coset_scan(G, hi, budget)
        if (minima[1:] >= 0).all() or hi >= ceiling:
            break
        hi = min(ceiling, 2 * hi)
    return {tuple((c >> i) & 1 for i in range(k)): int(minima[c]) for c in range(1, 2**k)}


def coset_count(L: FormLike, n: int, *, rank_cap: int = COSET_RANK_CAP,
                budget: int = DEFAULT_BUDGET) -> int:
    """#{nonzero classes of L/2L with minimum <= 2n + 2}.

    At least n + 3 when L is tight and n >= 2.  At n = 1 the value 4 can come
    from 2L, and <1,2,5,6> meets only three classes.
    """
    G = as_gram(L)
    _check_cap(G, rank_cap)
    # the count does not depend on the basis, so a reduced one is used
    minima = _coset_scan(reduce_gram(G), 2 * n + 2, budget)
    return int((minima[1:] >= 0).sum())


# ----------------------------------------------------------------------------
# the table


@dataclass
class BoundsReport:
    n: int
    lower: int
    lower_by: str
    upper: int
    upper_by: str
    certificates: list[TightCertificate] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"n": self.n, "lower": self.lower, "lower_by": self.lower_by,
                "upper": self.upper, "upper_by": self.upper_by,
                "certificates": [c.status for c in self.certificates]}


def _lower(n: int) -> tuple[int, str]:
    if n <= 3:
        return 4, "KnownValue"
    k = lower_bound(n)
    if 10 <= n <= 12:
        return k, "QuaternaryExclusion"
    return k, "Thm4.1"


def bounds_table(n_max: int, *, bound: int = DEFAULT_VERIFY) -> list[BoundsReport]:
    """Lower and upper bounds on t(n) for 1 <= n <= n_max.

    Lemma-based upper bounds are rechecked from their hypotheses every time.
    """
    rows: dict[int, list[tuple[int, GramForm, int, str]]] = {}
    for n, L, s, label in table_rows():
        rows.setdefault(n, []).append((n, L, s, label))
    out = []
    for n in range(1, n_max + 1):
        lo, lo_by = _lower(n)
        if n <= 3:
            out.append(BoundsReport(n, lo, lo_by, 4, "KnownValue"))
            continue
        best, by, certs = n + 1, "Xn", []
        for _, L, s, label in rows.get(n, []):
            cert = lemma_nn2n_check(L, n, s, bound=bound)
            certs.append(cert)
            if cert.verified and L.dim + 3 < best:
                best, by = L.dim + 3, f"LemmaNN2N({label}, s={s})"
        if thm42_upper_bound(n) < best:
            cert = lemma_nnnn_check(thm42_construct(n), n, bound=bound)
            certs.append(cert)
            if cert.verified:
                best, by = thm42_upper_bound(n), "Thm43"
        out.append(BoundsReport(n, lo, lo_by, best, by, certs))
    return out
