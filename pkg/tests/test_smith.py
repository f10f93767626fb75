import random

import pytest

from normtori.smith import (IntegerMatrix, divisibility_chain, int_det, is_unimodular,
                            minors_gcd_factors, smith_normal_form)


def _check(a: IntegerMatrix):
    d = smith_normal_form(a)
    assert d.u @ d.s @ d.v == a
    assert d.u_inv @ a @ d.v_inv == d.s
    assert is_unimodular(d.u) and is_unimodular(d.v)
    assert d.u @ d.u_inv == IntegerMatrix.identity(a.rows)
    assert d.v @ d.v_inv == IntegerMatrix.identity(a.cols)
    for i in range(d.s.rows):
        for j in range(d.s.cols):
            if i != j:
                assert d.s[i, j] == 0
    diag = d.diagonal
    assert all(x >= 0 for x in diag)
    nonzero = [x for x in diag if x]
    assert diag[:len(nonzero)] == nonzero
    assert divisibility_chain(nonzero)
    return d


def test_two_by_two_example():
    d = _check(IntegerMatrix.from_rows([[2, 4], [6, 8]]))
    assert d.diagonal == [2, 4]


def test_identity_and_zero():
    for n in range(5):
        assert smith_normal_form(IntegerMatrix.identity(n)).s == IntegerMatrix.identity(n)
    z = IntegerMatrix.zero(3, 2)
    assert _check(z).s == z


def test_empty_shapes():
    for r, c in [(0, 0), (0, 3), (3, 0)]:
        d = _check(IntegerMatrix.zero(r, c))
        assert d.invariant_factors == [] and d.rank == 0


def test_random_matrices_decompose():
    rng = random.Random(7)
    for _ in range(1000):
        r, c = rng.randint(0, 6), rng.randint(0, 6)
        a = IntegerMatrix.from_rows([[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)], c)
        _check(a)


def test_random_matrices_match_minors_oracle():
    rng = random.Random(8)
    for _ in range(200):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)]
        if rng.random() < 0.3:
            rows.append([2 * x - y for x, y in zip(rows[0], rows[-1])])  # force rank deficiency
        a = IntegerMatrix.from_rows(rows, c)
        d = smith_normal_form(a)
        assert [x for x in d.diagonal if x] == minors_gcd_factors(rows)


def test_bareiss_determinant():
    assert int_det([[2, 4], [6, 8]]) == -8
    assert int_det([]) == 1
    assert int_det([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0


def test_bad_shape_rejected():
    with pytest.raises(ValueError):
        IntegerMatrix(2, 2, (1, 2, 3))
