import numpy as np
import pytest

from oracles import random_unimodular
from tightforms.errors import RankMismatch
from tightforms.forms import GramForm
from tightforms.isometry import IsometryClasses, canonical_key, find_isometry, is_isometric

BASE = [
    [[2, 1, 0], [1, 3, 1], [0, 1, 5]],
    [[3, -1, -1, 1], [-1, 3, 0, -1], [-1, 0, 4, -2], [1, -1, -2, 5]],
    [[8, 1, 4, 3], [1, 9, 1, 4], [4, 1, 9, 0], [3, 4, 0, 9]],
]


@pytest.mark.parametrize("rows", BASE)
def test_random_basis_changes_are_detected(rows):
    rng = np.random.default_rng(len(rows))
    A = GramForm(rows)
    for _ in range(8):
        U = random_unimodular(A.dim, rng)
        B = GramForm(U.T @ A.matrix @ U)
        assert canonical_key(A) == canonical_key(B)
        V = find_isometry(A, B)
        assert V is not None
        assert (V.T @ A.matrix @ V == B.matrix).all()
        assert round(abs(np.linalg.det(V))) == 1


def test_non_isometric_pairs():
    # same determinant, different forms
    assert not is_isometric([[1, 0], [0, 6]], [[2, 0], [0, 3]])
    A, B = BASE[2], [[8, 1, 2, 3], [1, 9, 4, 4], [2, 4, 9, 3], [3, 4, 3, 9]]
    assert not is_isometric(A, B)
    with pytest.raises(RankMismatch):
        is_isometric([[1]], [[1, 0], [0, 1]])


def test_classes_deduplicate_and_are_stable():
    rng = np.random.default_rng(7)
    forms = []
    for rows in BASE[:2]:
        A = GramForm(rows)
        for _ in range(5):
            U = random_unimodular(A.dim, rng)
            forms.append(GramForm(U.T @ A.matrix @ U))
    c1, c2 = IsometryClasses(), IsometryClasses()
    for f in forms:
        c1.add(f)
    for f in reversed(forms):
        c2.add(f)
    assert len(c1) == 2
    again = IsometryClasses()
    for f in c1.representatives():
        again.add(f)
    assert again.representatives() == c1.representatives()
    assert [canonical_key(r) for r in c1.representatives()] == [canonical_key(r) for r in c2.representatives()]
