"""Exact homology machinery for Dehn fillings.

The bordered-matrix example [[5,1],[-1,-1/5]] with covector (1,5), the
wishful pair (100, -1/100) with norm 10001, and the surgery covector
(-7,7) were worked by hand from the defining formulas before this module
existed.
"""

import random
from fractions import Fraction
from math import gcd

import pytest

from relhyp.homology import (
    Filling, FillingMatrix, IntMatrix, LinkingMatrix,
    filling_matrix, filling_nullity_certificate, h1_presentation,
    kernel_rank_report, rank_nullity, snf, surgery_solve, wishful_fillings,
)


def test_intmatrix_basics():
    a = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert a.det() == 1
    assert IntMatrix.from_rows([[1, 2], [2, 4]]).det() == 0
    i2 = IntMatrix.identity(2)
    assert (a @ i2).entries == a.entries
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ValueError):
        a @ IntMatrix.identity(3)


def test_snf_frozen():
    u, d, v = snf(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert [d.entries[i][i] for i in range(2)] == [1, 6]
    _, d, _ = snf(IntMatrix.from_rows([[0, 0], [0, 0]]))
    assert all(x == 0 for row in d.entries for x in row)
    _, d, _ = snf(IntMatrix.from_rows([[2]]))
    assert d.entries == ((2,),)


def _check_snf(a):
    u, d, v = snf(a)
    assert (u @ d @ v).entries == a.entries
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    diag = [d.entries[i][i] for i in range(min(d.rows, d.cols))]
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d.entries[i][j] == 0
    for x, y in zip(diag, diag[1:]):
        assert x >= 0
        if x != 0:
            assert y % x == 0
        else:
            assert y == 0
    return diag


def test_snf_roundtrip_random():
    rng = random.Random(0)
    for _ in range(200):
        a = IntMatrix.from_rows(
            [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)])
        _check_snf(a)


def test_snf_rectangular():
    rng = random.Random(4)
    for rows, cols in ((2, 5), (5, 2), (1, 4), (4, 1)):
        for _ in range(20):
            a = IntMatrix.from_rows(
                [[rng.randint(-9, 9) for _ in range(cols)]
                 for _ in range(rows)])
            _check_snf(a)


def test_rank_nullity():
    assert rank_nullity([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (3, 0)
    assert rank_nullity([[1, 2], [2, 4]]) == (1, 1)
    assert rank_nullity([]) == (0, 0)
    assert rank_nullity([[Fraction(1, 2), 1], [1, 2]]) == (1, 1)


def test_rank_matches_snf():
    rng = random.Random(1)
    for _ in range(40):
        rows = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(5)]
        diag = _check_snf(IntMatrix.from_rows(rows))
        snf_rank = sum(1 for x in diag if x != 0)
        assert rank_nullity(rows)[0] == snf_rank


def test_linking_matrix_validation():
    LinkingMatrix.from_rows([[0, 1], [-1, 0]])
    LinkingMatrix.from_rows([[0, 1], [1, 0]], convention="symmetric")
    with pytest.raises(ValueError):
        LinkingMatrix.from_rows([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        LinkingMatrix.from_rows([[0, 1], [1, 0]])  # skew wants -1
    with pytest.raises(ValueError):
        LinkingMatrix.from_rows([[0, 1], [-1, 0]], convention="other")
    with pytest.raises(ValueError):
        LinkingMatrix(2, ((0, 1),), "skew")


def test_filling_validation():
    f = Filling(5, 1)
    assert f.ratio() == 5
    assert Filling(1, 0).ratio() is None
    Filling(0, 1, p=1, q=0)
    with pytest.raises(ValueError):
        Filling(2, 4)
    with pytest.raises(ValueError):
        Filling(2, 1, p=1, q=1)  # p*v + q*u = 3
    with pytest.raises(ValueError):
        Filling(2, 1, p=1)


def test_filling_matrix_frozen():
    k = LinkingMatrix.from_rows([[0, 1], [-1, 0]])
    b = filling_matrix(k, [Filling(5, 1), Filling(-1, 5)])
    assert b.rows == ((Fraction(5), Fraction(1)),
                      (Fraction(-1), Fraction(-1, 5)))
    assert rank_nullity(b.rows) == (1, 1)
    assert b.unreduced == ()

    empty = filling_matrix(k, [None, None])
    assert empty.rows == ()
    assert filling_nullity_certificate(empty) == (0, ())

    zero_k = LinkingMatrix.from_rows([[0, 0], [0, 0]])
    b2 = filling_matrix(zero_k, [Filling(1, 0), Filling(3, 1)])
    assert b2.unreduced == (0,)
    assert b2.rows[0] == (Fraction(1), Fraction(0))
    assert rank_nullity(b2.rows) == (2, 0)  # diagonal, full rank


def test_nullity_certificate_frozen():
    k = LinkingMatrix.from_rows([[0, 1], [-1, 0]])
    b = filling_matrix(k, [Filling(5, 1), Filling(-1, 5)])
    nullity, basis = filling_nullity_certificate(b)
    assert nullity == 1
    assert basis == ((1, 5),)
    # certificate really kills every column
    for c in range(2):
        assert sum(basis[0][r] * b.rows[r][c] for r in range(2)) == 0

    assert filling_nullity_certificate([(1, 0), (0, 1)]) == (0, ())
    nullity, basis = filling_nullity_certificate(
        [(0, 0, 0)] * 3)
    assert nullity == 3
    assert len(basis) == 3


def test_wishful_frozen():
    res = wishful_fillings([[0, 1], [-1, 0]], 100)
    assert res.ratios == (Fraction(100), Fraction(-1, 100))
    assert res.tau == (1, 100)
    assert res.min_norm == 10001
    assert res.fillings[1] == Filling(-1, 100)

    single = wishful_fillings([[0, 1]], 7)
    assert single.ratios == (Fraction(7),)

    with pytest.raises(ValueError):
        wishful_fillings([[0, 0], [0, 0]], 10)
    with pytest.raises(ValueError):  # row cancels at t = 1
        wishful_fillings([[0, 1, -1], [-1, 0, 1], [1, -1, 0]], 1)


def test_wishful_norm_grows_with_t():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 4)
        rows = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            x = rng.choice([1, -1]) * rng.randint(1, 5)
            rows[i][i + 1] = x
            rows[i + 1][i] = -x
        # prime t keeps gcd(entry, t) = 1, so reduction cannot shrink
        # the pair below the growth scale
        for t in (11, 101):
            try:
                res = wishful_fillings(rows, t)
            except ValueError:
                continue  # a ratio cancelled; hypothesis rejects the t
            assert res.min_norm >= t


def test_surgery_frozen():
    res = surgery_solve([[0, 1, 1], [-1, 0, 1]], (7,))
    assert res.alpha == (Fraction(-7), Fraction(7))
    assert res.fillings == (Filling(-1, 1), Filling(1, 1))
    assert res.basis_columns == (0,)
    assert res.nullity >= 1
    # requested value really is -alpha . x_{j_1}
    x0 = (0, -1)
    assert -sum(a * b for a, b in zip(res.alpha, x0)) == 7

    with pytest.raises(ValueError):
        surgery_solve([[0, 1, 1], [-1, 0, 1]], (7, 3))


def test_surgery_rank_one():
    res = surgery_solve([[0, 0, 1], [0, 0, 2]])
    assert res.alpha == (Fraction(2), Fraction(-1))
    assert res.basis_columns == ()
    assert res.fillings == (Filling(0, 1), Filling(0, 1))
    assert res.nullity >= 1


def test_surgery_errors():
    with pytest.raises(ValueError):
        surgery_solve([[0, 1, 0], [-1, 0, 0]])  # last column vanishes
    with pytest.raises(ValueError):
        surgery_solve([])
    with pytest.raises(ValueError, match="n-1 rows"):
        surgery_solve([[0, 1], [1, 0], [1, 1]])  # not an (n-1) x n block
    with pytest.raises(ValueError, match="must be zero"):
        surgery_solve([[3, 1, 1], [-1, 0, 1]])  # nonzero diagonal


def _pq_for(u, v):
    # extended euclid: p*v + q*u = 1
    old_r, r = v, u
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r == -1:
        old_r, old_s, old_t = 1, -old_s, -old_t
    assert old_r == 1
    return old_s, old_t


def test_h1_presentation_frozen():
    k = LinkingMatrix.from_rows([[0, 1], [-1, 0]])
    fills = [Filling(0, 1, p=1, q=0), Filling(0, 1, p=1, q=0)]
    pres, bound, torsion = h1_presentation(k, fills)
    assert (pres.rows, pres.cols) == (4, 4)
    assert bound == 0
    assert torsion == ()

    # meridian refill gives back the sphere
    fills = [Filling(1, 0, p=0, q=1), Filling(1, 0, p=0, q=1)]
    _, bound, torsion = h1_presentation(k, fills)
    assert bound == 0 and torsion == ()

    # single unknot component, (2,1) surgery: a lens space
    k1 = LinkingMatrix.from_rows([[0]])
    _, bound, torsion = h1_presentation(k1, [Filling(2, 1, p=1, q=0)])
    assert bound == 0
    assert torsion == (2,)


def test_h1_no_fillings():
    k = LinkingMatrix.from_rows([[0, 0], [0, 0]])
    pres, bound, torsion = h1_presentation(k, [])
    assert (pres.rows, pres.cols) == (2, 0)
    assert bound == 2 and torsion == ()
    _, bound, _ = h1_presentation(LinkingMatrix.from_rows([[0]]), [])
    assert bound == 1


def test_h1_errors():
    k = LinkingMatrix.from_rows([[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        h1_presentation(k, [Filling(0, 1), Filling(0, 1)])  # missing (p,q)
    with pytest.raises(ValueError):
        h1_presentation(k, [Filling(0, 1, p=1, q=0)] * 3)


def test_kernel_rank_report():
    k = LinkingMatrix.from_rows([[0, 1], [-1, 0]])
    wish = wishful_fillings(k.entries, 100)
    fills = []
    for f in wish.fillings:
        p, q = _pq_for(f.u, f.v)
        fills.append(Filling(f.u, f.v, p=p, q=q))
    assert kernel_rank_report(k, fills) == 1

    zero_k = LinkingMatrix.from_rows([[0, 0], [0, 0]])
    assert kernel_rank_report(zero_k, []) == 0

    hopf_fills = [Filling(0, 1, p=1, q=0), Filling(0, 1, p=1, q=0)]
    assert kernel_rank_report(k, hopf_fills) == 0


def test_sublemma_identity_random():
    """rank(H1 bound) - m equals the meridian-set nullity on generated
    instances; h1_presentation raises if its internal identity fails, so
    this drives that check across random skew matrices and fillings."""
    rng = random.Random(7)
    made = 0
    while made < 100:
        n = rng.randint(2, 5)
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                x = rng.randint(-3, 3)
                rows[i][j] = x
                rows[j][i] = -x
        k = LinkingMatrix.from_rows(rows)
        nf = rng.randint(0, n)
        fills = []
        for i in range(nf):
            while True:
                u, v = rng.randint(-6, 6), rng.randint(0, 6)
                if gcd(u, v) == 1:
                    break
            p, q = _pq_for(u, v)
            fills.append(Filling(u, v, p=p, q=q))
        _, bound, _ = h1_presentation(k, fills)
        m = n - nf
        b = filling_matrix(k, fills)
        nullity, _ = filling_nullity_certificate(b)
        assert bound - m == nullity
        made += 1
