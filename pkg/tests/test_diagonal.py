import pytest

import expected
from tightforms.diagonal import (check_xy_precedence, enumerate_new_tight, forced_coefficients,
                                 is_subsequence, make_Xn, make_Yn, non_newness_prune, psi,
                                 recursion_step, run_recursion)
from tightforms.errors import CutoffTooSmall, RankCapReached


def _counts(levels, rank):
    lv = next(l for l in levels if l.rank == rank)
    return len(lv.A), len(lv.B), len(lv.Bprime), len(lv.C)


def test_psi_anchors():
    for p in expected.A4_T3:
        want = expected.PSI_SPECIAL.get(p, p[-1] + 1)
        assert psi(p, 2205).value == want
    assert psi((2, 3, 4), 100).value == 10
    assert not psi((2, 2, 3, 4), 575).finite


def test_t3_ledger_and_table():
    levels = run_recursion(3, 2205, 6)
    for rank, want in expected.LEDGER_T3.items():
        assert _counts(levels, rank) == want
    assert set(levels[-1].C) == expected.C6_T3
    e = enumerate_new_tight(3, 2205, 7)
    assert len(e.certificates) == 79
    assert set(e.tuples()) == expected.TABLE_T3


def test_t2_ledger_and_table():
    levels = run_recursion(2, 575, 5)
    for rank, want in expected.LEDGER_T2.items():
        assert _counts(levels, rank) == want
    assert set(levels[-1].C) == expected.C5_T2
    assert set(enumerate_new_tight(2, 575, 6).tuples()) == expected.TABLE_T2


@pytest.mark.parametrize("n", range(4, 13))
def test_only_x_and_y(n):
    assert set(enumerate_new_tight(n, 10**4, n + 2).tuples()) == {make_Xn(n).coeffs, make_Yn(n).coeffs}


def test_t1_cross_checks():
    levels = run_recursion(1, 10**4, 5)
    assert len(levels[3].B) == 54
    assert set(levels[4].Bprime) == expected.T1_RANK5_NEW


def test_subsequence_and_precedence():
    assert is_subsequence((1, 3), (1, 2, 3))
    assert not is_subsequence((3, 1), (1, 2, 3))
    assert is_subsequence((1, 2), (1, 2), proper=False) and not is_subsequence((1, 2), (1, 2), proper=True)
    for t in expected.TABLE_T3:
        assert check_xy_precedence(t, 3)
    assert not check_xy_precedence((3, 3, 4, 4), 3)


def test_forced_and_pruning():
    assert forced_coefficients((3, 3, 3, 3, 3, 3)) == {4, 5}
    assert all(non_newness_prune(p, 2205, 3) for p in expected.C6_T3)
    assert not non_newness_prune((3, 4, 5, 6, 11), 2205, 3)


def test_errors():
    with pytest.raises(CutoffTooSmall) as ei:
        recursion_step([(3, 3, 4, 5)], 15, 3)
    assert ei.value.prefix == (3, 3, 4, 5)
    with pytest.raises(RankCapReached):
        enumerate_new_tight(3, 2205, 5)
