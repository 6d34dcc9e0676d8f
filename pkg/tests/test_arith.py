import pytest

from tightforms.arith import EXCEPTION_PREDICATES, exc_113, exc_123, exc_126, fifteen_criterion, in_set_A446
from tightforms.forms import DiagonalForm, represented_set

N = 5000


@pytest.mark.parametrize("name", ["T123", "T126", "T113"])
def test_exception_sets_match_enumeration(name):
    coeffs, pred, _ = EXCEPTION_PREDICATES[name]
    values = represented_set(DiagonalForm.of(coeffs), 1, N)
    mismatches = [m for m in range(1, N + 1) if pred(m) == (m in values)]
    assert mismatches == []


def test_hand_values():
    assert exc_123(10) and exc_123(40) and exc_123(26) and not exc_123(11)
    assert exc_126(5) and exc_126(20) and not exc_126(6)
    assert exc_113(6) and exc_113(2 * 27) and not exc_113(2 * 9) and not exc_113(2)


def test_A446_is_inside_the_values():
    values = represented_set(DiagonalForm.of(4, 4, 6), 1, 3000)
    assert all(m in values for m in range(1, 3001) if in_set_A446(m))


def test_fifteen():
    assert fifteen_criterion(DiagonalForm.of(1, 1, 1, 1))
    assert fifteen_criterion(DiagonalForm.of(1, 2, 5, 10))
    assert not fifteen_criterion(DiagonalForm.of(1, 2, 5, 5))
