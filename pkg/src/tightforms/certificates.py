"""Bounded-verification certificates of tight T(n)-universality."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .forms import DiagonalForm, FormLike, GramForm, as_gram, minimum, represents, value_mask

BOUNDED_VERIFIED = "bounded-verified"
PAPER_PROVED = "paper-proved"
REFUTED = "refuted"


@dataclass(frozen=True)
class TightCertificate:
    """Outcome of checking Q(form) ∩ [1, verify_bound] == [n, verify_bound].

    ``proved_by`` names a published argument covering the tail beyond the
    bound, when one exists.  A refutation carries either the least missing
    integer ``missing`` or an integer ``below`` n together with its witness.
    """

    n: int
    form: Union[DiagonalForm, GramForm]
    verify_bound: int
    status: str
    proved_by: Optional[str] = None
    missing: Optional[int] = None
    below: Optional[int] = None
    witness: Optional[tuple[int, ...]] = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def verified(self) -> bool:
        return self.status in (BOUNDED_VERIFIED, PAPER_PROVED)

    @property
    def rank(self) -> int:
        return self.form.dim

    def coeffs(self) -> tuple[int, ...]:
        if isinstance(self.form, DiagonalForm):
            return self.form.coeffs
        return as_gram(self.form).diagonal_entries


def certify_tight(form: FormLike, n: int, bound: int, *, proved_by: str | None = None,
                  mask: np.ndarray | None = None) -> TightCertificate:
    """Check that ``form`` represents exactly [n, bound] among integers <= bound.

    ``mask`` may supply a precomputed 0-inclusive value mask (any subset of
    the true value set is sound for coverage); nothing-below-n is always
    decided by the exact minimum.
    """
    keep = form if isinstance(form, (DiagonalForm, GramForm)) else as_gram(form)
    G = as_gram(keep)
    mu = minimum(G)
    if mu < n:
        w = represents(G, mu)
        return TightCertificate(n, keep, bound, REFUTED, below=mu, witness=w.vector)
    if mask is not None and not mask[n: bound + 1].all():
        mask = None
    if mask is None:
        mask = value_mask(G, bound, lo=n)
    missing = np.flatnonzero(~mask[n: bound + 1])
    if len(missing):
        return TightCertificate(n, keep, bound, REFUTED, missing=int(missing[0]) + n)
    return TightCertificate(n, keep, bound, BOUNDED_VERIFIED, proved_by=proved_by)
