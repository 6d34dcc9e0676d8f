"""Closed-form exceptional sets of a few ternary forms, and the 15-criterion.

Each predicate works by stripping a prime-power factor, so it is exact for
arbitrary m; the test-suite checks them against exhaustive enumeration.
"""

from .forms import FormLike, represented_set


def _strip(m: int, p: int) -> tuple[int, int]:
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return m, e


def exc_123(m: int) -> bool:
    """m = 4^r (16s + 10): the integers missed by x^2 + 2y^2 + 3z^2."""
    while m % 4 == 0:
        m //= 4
    return m % 16 == 10


def exc_126(m: int) -> bool:
    """m = 4^r (8s + 5): the integers missed by x^2 + 2y^2 + 6z^2."""
    while m % 4 == 0:
        m //= 4
    return m % 8 == 5


def exc_113(m: int) -> bool:
    """m = 3^(2a+1) (3b + 2): the integers missed by x^2 + y^2 + 3z^2."""
    u, e = _strip(m, 3)
    return e % 2 == 1 and u % 3 == 2


def in_set_A446(m: int) -> bool:
    """Even m with m != 2 mod 16 and 3 not dividing m; all are values of <4,4,6>."""
    return m % 2 == 0 and m % 16 != 2 and m % 3 != 0


EXCEPTION_PREDICATES = {
    "T123": ((1, 2, 3), exc_123, "m = 4^r(16s+10)"),
    "T126": ((1, 2, 6), exc_126, "m = 4^r(8s+5)"),
    "T113": ((1, 1, 3), exc_113, "m = 3^(2a+1)(3b+2)"),
    "K446": ((4, 4, 6), in_set_A446, "m even, m != 2 (mod 16), m != 0 (mod 3)"),
}


def fifteen_criterion(f: FormLike) -> bool:
    """True iff f represents 1, ..., 15 (hence every positive integer)."""
    return represented_set(f, 1, 15) == set(range(1, 16))
