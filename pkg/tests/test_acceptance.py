"""One test per acceptance criterion, each printing a PASS/FAIL line."""

import time

import pytest

import expected
import oracles
from tightforms.arith import EXCEPTION_PREDICATES
from tightforms.certificates import certify_tight
from tightforms.constructions import (HALMOS, coset_count, lemma_nn2n_check, lemma_nnnn_check,
                                      table_rows, thm42_construct, thm42_upper_bound)
from tightforms.diagonal import enumerate_new_tight, make_Xn, make_Yn, psi, run_recursion
from tightforms.escalation import escalation_search, quaternary_census
from tightforms.forms import DiagonalForm, GramForm, minimum, represented_set, represents, truant
from tightforms.isometry import is_isometric


def _counts(levels, rank):
    lv = next(l for l in levels if l.rank == rank)
    return len(lv.A), len(lv.B), len(lv.Bprime), len(lv.C)


@pytest.fixture(scope="module")
def t3():
    return enumerate_new_tight(3, 2205, 7)


@pytest.fixture(scope="module")
def t2():
    return enumerate_new_tight(2, 575, 6)


@pytest.fixture(scope="module")
def xy():
    return {n: enumerate_new_tight(n, 10**4, n + 2) for n in range(4, 13)}


@pytest.fixture(scope="module")
def t1():
    return run_recursion(1, 10**4, 5), escalation_search(1, 4, 10**4, overlattices=True)


@pytest.fixture(scope="module")
def quaternary():
    return {n: escalation_search(n, 4, 10**4) for n in (8, 9, 10, 11, 12)}


@pytest.fixture(scope="module")
def census():
    return {n: quaternary_census(n, 10**4) for n in range(2, 8)}


def test_c01_exception_sets(report):
    t = time.perf_counter()
    bad = 0
    for name in ("T123", "T126", "T113"):
        coeffs, pred, _ = EXCEPTION_PREDICATES[name]
        vals = represented_set(DiagonalForm.of(coeffs), 1, 5000)
        bad += sum(pred(m) == (m in vals) for m in range(1, 5001))
    dt = time.perf_counter() - t
    ok = bad == 0 and dt < 10
    assert report(1, ok, f"{bad} mismatches for m <= 5000 in {dt:.2f}s")


def test_c02_table_t3(report, t3):
    levels = t3.levels
    counts_ok = all(_counts(levels, r) == v for r, v in expected.LEDGER_T3.items())
    tuples = set(t3.tuples())
    ok = len(t3.certificates) == 79 and tuples == expected.TABLE_T3 and counts_ok
    assert report(2, ok, f"{len(t3.certificates)} certificates, table match {tuples == expected.TABLE_T3}, "
                         f"ledger match {counts_ok}")


def test_c03_table_t2(report, t2):
    levels = t2.levels
    counts_ok = all(_counts(levels, r) == v for r, v in expected.LEDGER_T2.items())
    c5 = set(next(l for l in levels if l.rank == 5).C)
    ok = len(t2.certificates) == 90 and set(t2.tuples()) == expected.TABLE_T2 and counts_ok \
        and c5 == expected.C5_T2
    assert report(3, ok, f"{len(t2.certificates)} certificates, ledger match {counts_ok}, "
                         f"C(5) match {c5 == expected.C5_T2}")


def test_c04_only_x_and_y(report, xy):
    bad = [n for n, e in xy.items() if set(e.tuples()) != {make_Xn(n).coeffs, make_Yn(n).coeffs}]
    assert report(4, not bad, f"n = 4..12 give exactly X_n, Y_n; failures: {bad}")


@pytest.mark.extended
def test_c05_t1(report, t1):
    levels, esc = t1
    n_b4 = len(levels[3].B)
    rank5 = set(levels[4].Bprime)
    n_cls = len(esc.certificates)
    diag_cls = [c.form for c in esc.certificates if c.form.is_diagonal()]
    # every rank-4 diagonal certificate must sit in an escalation class
    covered = all(any(is_isometric(DiagonalForm(p).to_gram(), c.form) for c in esc.certificates)
                  for p in levels[3].B)
    ok = n_b4 == 54 and rank5 == expected.T1_RANK5_NEW and n_cls == 204 and covered
    assert report(5, ok, f"diagonal rank 4: {n_b4}, rank-5 list match {rank5 == expected.T1_RANK5_NEW}, "
                         f"escalation classes {n_cls} ({len(diag_cls)} diagonal), diagonal covered {covered}")


def test_c06_psi_anchors(report):
    got = {p: psi(p, 2205).value for p in expected.A4_T3}
    want = {p: expected.PSI_SPECIAL.get(p, p[-1] + 1) for p in expected.A4_T3}
    assert report(6, got == want, f"psi(3,3,4,5)={got[(3, 3, 4, 5)]}, psi(3,4,5,6)={got[(3, 4, 5, 6)]}, "
                                  f"others a4+1: {got == want}")


def test_c07a_escalation_anchors(report, quaternary):
    n8 = [c.form for c in quaternary[8].certificates]
    n9 = [c.form for c in quaternary[9].certificates]
    iso8 = len(n8) == 2 and all(any(is_isometric(f, GramForm(m)) for f in n8) for m in expected.T8_CANDIDATES)
    iso9 = len(n9) == 1 and is_isometric(n9[0], GramForm(expected.T9_CANDIDATE))
    empty = [len(quaternary[n].certificates) for n in (10, 11, 12)]
    ok = iso8 and iso9 and empty == [0, 0, 0]
    assert report(7, ok, f"n=8: {len(n8)} classes (match {iso8}), n=9: {len(n9)} (match {iso9}), "
                         f"n=10..12: {empty}")


@pytest.mark.extended
def test_c07b_census(report, census):
    got = {n: (m1, m2) for n, (m1, m2, _) in census.items()}
    ok = got == expected.CENSUS
    assert report(7, ok, "census (m1, m2) " + ", ".join(f"n={n}:{got[n]}" for n in sorted(got)))


def test_c08_construction_tables(report):
    t = time.perf_counter()
    fails = [(n, label) for n, L, s, label in table_rows() if not lemma_nn2n_check(L, n, s).verified]
    dt = time.perf_counter() - t
    ok = not fails and dt < 60
    assert report(8, ok, f"{len(table_rows())} rows, {len(fails)} failures, {dt:.1f}s")


def test_c09_general_construction(report):
    t = time.perf_counter()
    bad = []
    for n in range(4, 51):
        L = thm42_construct(n)
        low = set(range(n + 1, 2 * n)) <= represented_set(L, n + 1, 2 * n - 1)
        cert = lemma_nnnn_check(L, n)
        if minimum(L) != 2 * (n // 2) + 1 or not low or not cert.verified \
                or L.dim + 4 != thm42_upper_bound(n):
            bad.append(n)
    dt = time.perf_counter() - t
    ok = not bad and dt < 300
    assert report(9, ok, f"n = 4..50, failures {bad}, {dt:.1f}s")


@pytest.fixture(scope="module")
def coset_checks(t3, t2, xy, t1, quaternary, census):
    certs = list(t3.certificates) + list(t2.certificates)
    for e in xy.values():
        certs += e.certificates
    certs += t1[1].certificates
    for res in quaternary.values():
        certs += res.certificates
    for n, (_, _, classes) in census.items():
        certs += [certify_tight(G, n, 10**4) for G in classes]
    certs = [c for c in certs if c.verified and c.rank <= 10]
    rows = []
    for c in certs:
        G = c.form.to_gram() if isinstance(c.form, DiagonalForm) else c.form
        rows.append((c, G, coset_count(G, c.n)))
    return rows


@pytest.mark.xfail(strict=True, reason="the coset count drops below n + 3 at n = 1; see decisions ledger")
def test_c10_coset_lower_bound(report, coset_checks):
    bad = [(c.n, G) for c, G, count in coset_checks if count < c.n + 3]
    at_n = sorted({n for n, _ in bad})
    rank_ok = all(2**c.rank - 1 >= c.n + 3 for c, _, _ in coset_checks)
    report(10, not bad, f"{len(coset_checks)} certificates of rank <= 10, {len(bad)} violations "
                        f"(at n = {at_n}); 2^k - 1 >= n + 3 for all: {rank_ok}")
    assert not bad


def test_c10_violations_are_genuine(coset_checks):
    # away from n = 1 the count holds everywhere; each n = 1 shortfall is
    # confirmed by brute force, so the gap is not an artefact of coset_count
    assert all(count >= c.n + 3 for c, _, count in coset_checks if c.n >= 2)
    short = [(c, G, count) for c, G, count in coset_checks if count < c.n + 3]
    assert short
    for c, G, count in short:
        assert c.n == 1
        assert len(oracles.coset_classes_upto(G.entries, 2 * c.n + 2)) == count
    assert 2**min(c.rank for c, _, _ in coset_checks) - 1 >= 4


def test_c11_spot_checks(report):
    halmos = certify_tight(HALMOS, 2, 10**4).verified and represented_set(HALMOS, 1, 1) == set()
    t3456 = truant(DiagonalForm.of(3, 4, 5, 6), 3, 10**4).truant == 35
    x4 = certify_tight(make_Xn(4), 4, 10**4).verified
    y4f = make_Yn(4)
    y4 = certify_tight(y4f, 4, 10**4).verified
    ys = all((w := represents(y4f, u)) is not None and y4f.to_gram().value(w.vector) == u
             for u in range(4, 113))
    ok = halmos and t3456 and x4 and y4 and ys
    assert report(11, ok, f"Halmos {halmos}, truant(3,4,5,6)=35 {t3456}, X4 {x4}, Y4 {y4}, "
                          f"Y4 witnesses through 112 {ys}")
