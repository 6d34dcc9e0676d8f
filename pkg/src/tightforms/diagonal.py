"""Classification of new diagonal tight T(n)-universal forms.

Prefixes (a_1, ..., a_l) with a_1 = n are grown level by level: a prefix
whose smallest missed integer psi is finite is extended by every coefficient
in [a_l, psi]; a prefix that misses nothing up to the cutoff is universal
(set B), and it is *new* when no proper subsequence is already universal
(set B').  Everything is exact up to the cutoff.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .certificates import BOUNDED_VERIFIED, TightCertificate
from .errors import CutoffTooSmall, RankCapReached
from .forms import DiagonalForm, diagonal_mask, extend_diagonal_mask

Prefix = tuple[int, ...]

# verification bounds used by the published classification proofs
DEFAULT_CUTOFFS = {2: 575, 3: 2205}


def default_cutoff(n: int) -> int:
    return DEFAULT_CUTOFFS.get(n, 10**4)


@dataclass(frozen=True)
class PsiValue:
    """psi of a prefix: a finite truant, or InfiniteUpTo(cutoff) when ``value is None``."""

    value: Optional[int]
    cutoff: int

    @property
    def finite(self) -> bool:
        return self.value is not None

    def __str__(self):
        return f"Finite({self.value})" if self.finite else f"InfiniteUpTo({self.cutoff})"


def is_subsequence(u: Sequence[int], v: Sequence[int], proper: bool = False) -> bool:
    """u ⪯ v for nondecreasing sequences (u ≺ v when ``proper``)."""
    it = iter(v)
    ok = all(any(a == b for b in it) for a in u)
    if proper:
        return ok and len(u) < len(v)
    return ok


@lru_cache(maxsize=8192)
def _mask(coeffs: Prefix, cutoff: int) -> np.ndarray:
    if len(coeffs) > 1:
        return extend_diagonal_mask(_mask(coeffs[:-1], cutoff), coeffs[-1])
    return diagonal_mask(coeffs, cutoff)


def _first_missing(mask: np.ndarray, n: int) -> Optional[int]:
    miss = np.flatnonzero(~mask[n:])
    return int(miss[0]) + n if len(miss) else None


def psi(p: Sequence[int], cutoff: int, n: Optional[int] = None) -> PsiValue:
    p = tuple(p)
    n = p[0] if n is None else n
    if cutoff < n:
        raise CutoffTooSmall(p, cutoff)
    return PsiValue(_first_missing(_mask(p, cutoff), n), cutoff)


def is_universal(coeffs: Sequence[int], n: int, cutoff: int) -> bool:
    """Bounded T(n)-universality: every integer of [n, cutoff] is represented."""
    coeffs = tuple(sorted(coeffs))
    if not coeffs:
        return False
    return _first_missing(_mask(coeffs, cutoff), n) is None


def forced_coefficients(p: Sequence[int], cutoff: Optional[int] = None, n: Optional[int] = None) -> set[int]:
    """Integers in [n, a_l + a_1) missed by the prefix.

    Any value below a_l + a_1 can only be represented by a single later
    coefficient, so each of these must reappear verbatim in every tight
    extension.
    """
    p = tuple(p)
    n = p[0] if n is None else n
    top = p[-1] + p[0]
    mask = diagonal_mask(p, top)
    return {m for m in range(n, top) if not mask[m]}


def non_newness_prune(p: Sequence[int], cutoff: int, n: Optional[int] = None) -> bool:
    """True if no tight extension of ``p`` can be new.

    Searches for forced integers a_s < m_1 < ... < m_r < a_s + a_1 and s - r
    prefix coefficients that together form a universal diagonal form.  Every
    candidate must contain each of n, ..., 2n - 1, which bounds the search.
    """
    p = tuple(p)
    n = p[0] if n is None else n
    s = len(p)
    if s < 2:
        return False
    ms = sorted(m for m in forced_coefficients(p, cutoff, n) if m > p[-1])
    needed = set(range(n, 2 * n))
    p_values = set(p)
    must_m = needed - p_values
    if not must_m <= set(ms):
        return False
    tried = set()
    for r in range(max(1, len(must_m)), min(len(ms), s - 1) + 1):
        for M in itertools.combinations(ms, r):
            if not must_m <= set(M):
                continue
            base = sorted((needed - set(M)) & p_values)
            rest = list(p)
            for v in base:
                rest.remove(v)
            free = s - r - len(base)
            if free < 0:
                continue
            for extra in set(itertools.combinations(rest, free)):
                cand = tuple(sorted(base + list(extra) + list(M)))
                if cand in tried:
                    continue
                tried.add(cand)
                if is_universal(cand, n, cutoff):
                    return True
    return False


@dataclass
class Level:
    """The sets A(l), B(l), B'(l), C(l) of one recursion level."""

    rank: int
    A: list[Prefix]
    B: list[Prefix]
    Bprime: list[Prefix]
    C: list[Prefix]
    psi: dict[Prefix, Optional[int]] = field(repr=False, default_factory=dict)

    def counts(self) -> dict[str, int]:
        return {"A": len(self.A), "B": len(self.B), "B'": len(self.Bprime), "C": len(self.C)}


def _is_new(p: Prefix, n: int, cutoff: int) -> bool:
    # universality is monotone, so testing the drop-one subsequences suffices
    for i in range(len(p)):
        if i and p[i] == p[i - 1]:
            continue
        sub = p[:i] + p[i + 1:]
        if sub and sub[0] == n and is_universal(sub, n, cutoff):
            return False
    return True


def classify_level(rank: int, A: Iterable[Prefix], n: int, cutoff: int) -> Level:
    A = sorted(set(A))
    B, C, Bp, ps = [], [], [], {}
    for p in A:
        v = psi(p, cutoff, n).value
        ps[p] = v
        if v is None:
            B.append(p)
            if _is_new(p, n, cutoff):
                Bp.append(p)
        else:
            C.append(p)
    return Level(rank, A, B, Bp, C, ps)


def recursion_step(C_l: Iterable[Prefix], cutoff: int, n: Optional[int] = None,
                   psi_values: Optional[dict] = None) -> Level:
    """Extend every survivor of level l and classify level l + 1."""
    C_l = sorted(set(tuple(p) for p in C_l))
    if not C_l:
        return Level(0, [], [], [], [])
    n = C_l[0][0] if n is None else n
    nxt = []
    for p in C_l:
        v = psi_values.get(p) if psi_values else None
        if v is None:
            v = psi(p, cutoff, n).value
        if v is None:
            raise ValueError(f"prefix {p} is already universal")
        if v + n > cutoff:
            raise CutoffTooSmall(p, cutoff)
        nxt.extend(p + (a,) for a in range(p[-1], v + 1))
    return classify_level(len(C_l[0]) + 1, nxt, n, cutoff)


def run_recursion(n: int, cutoff: int, max_rank: int) -> list[Level]:
    """Levels 1 .. max_rank (fewer if C becomes empty)."""
    levels = [classify_level(1, [(n,)], n, cutoff)]
    while levels[-1].rank < max_rank and levels[-1].C:
        levels.append(recursion_step(levels[-1].C, cutoff, n, levels[-1].psi))
    return levels


@dataclass
class Enumeration:
    n: int
    cutoff: int
    rank_cap: int
    levels: list[Level]
    certificates: list[TightCertificate]
    pruned: list[Prefix]

    def counts(self) -> dict[int, dict[str, int]]:
        return {lv.rank: lv.counts() for lv in self.levels}

    def tuples(self) -> list[Prefix]:
        return [c.form.coeffs for c in self.certificates]


def enumerate_new_tight(n: int, cutoff: Optional[int] = None, rank_cap: int = 8) -> Enumeration:
    """All new diagonal tight T(n)-universal forms, certified up to ``cutoff``.

    Levels are built until C is empty or every survivor is shown to have no
    new tight extension.  If that has not happened by ``rank_cap``,
    :class:`RankCapReached` is raised with the offending prefixes.
    """
    cutoff = default_cutoff(n) if cutoff is None else cutoff
    levels = [classify_level(1, [(n,)], n, cutoff)]
    pruned: list[Prefix] = []
    while levels[-1].C:
        survivors = levels[-1].C
        failed = [p for p in survivors if not non_newness_prune(p, cutoff, n)]
        if not failed:
            pruned = list(survivors)
            break
        if levels[-1].rank >= rank_cap:
            raise RankCapReached(rank_cap, failed)
        levels.append(recursion_step(survivors, cutoff, n, levels[-1].psi))
    certs = [
        TightCertificate(n, DiagonalForm(p), cutoff, BOUNDED_VERIFIED)
        for lv in levels for p in lv.Bprime
    ]
    return Enumeration(n, cutoff, rank_cap, levels, certs, pruned)


def make_Xn(n: int) -> DiagonalForm:
    """<n, n+1, ..., 2n>."""
    return DiagonalForm(tuple(range(n, 2 * n + 1)))


def make_Yn(n: int) -> DiagonalForm:
    """<n, n, n+1, ..., 2n-1>."""
    return DiagonalForm((n,) + tuple(range(n, 2 * n)))


def check_xy_precedence(f: Sequence[int] | DiagonalForm, n: int) -> bool:
    """X_n ⪯ f or Y_n ⪯ f."""
    coeffs = tuple(f.coeffs if isinstance(f, DiagonalForm) else sorted(f))
    return is_subsequence(make_Xn(n).coeffs, coeffs) or is_subsequence(make_Yn(n).coeffs, coeffs)
