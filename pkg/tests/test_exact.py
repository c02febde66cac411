"""Rational linear algebra against numpy and hand-worked cases."""

from fractions import Fraction

import numpy as np
import pytest

from torickit import exact


def test_frac_parses_strings_and_ints():
    assert exact.frac("3/4") == Fraction(3, 4)
    assert exact.frac(-2) == Fraction(-2)
    assert exact.frac(Fraction(1, 3)) == Fraction(1, 3)


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        exact.frac(0.5)


def test_frac_str_roundtrip():
    assert exact.frac_str(Fraction(3, 4)) == "3/4"
    assert exact.frac_str(Fraction(-5)) == "-5"
    assert exact.frac(exact.frac_str(Fraction(22, 7))) == Fraction(22, 7)


def test_det_hand_cases():
    assert exact.det([[Fraction(2)]]) == 2
    assert exact.det([[1, 2], [3, 4]]) == -2
    assert exact.det([[0, 1, 0], [0, 0, 1], [1, 0, 0]]) == 1


def test_det_and_rank_match_numpy_on_random_integer_matrices():
    rng = np.random.default_rng(7)
    for _ in range(40):
        n = int(rng.integers(1, 5))
        m = rng.integers(-4, 5, size=(n, n))
        d = exact.det([[Fraction(int(v)) for v in row] for row in m])
        assert d == round(float(np.linalg.det(m.astype(float))))
        r = exact.rank([[Fraction(int(v)) for v in row] for row in m])
        assert r == np.linalg.matrix_rank(m.astype(float))


def test_solve_exact():
    rows = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    sol = exact.solve(rows, [Fraction(5), Fraction(10)])
    assert sol == (Fraction(1), Fraction(3))
    singular = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert exact.solve(singular, [Fraction(1), Fraction(1)]) is None


def test_inverse_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(1, 5))
        m = rng.integers(-3, 4, size=(n, n))
        rows = [[Fraction(int(v)) for v in row] for row in m]
        if exact.det(rows) == 0:
            continue
        inv = exact.inverse(rows)
        prod = [
            [sum(rows[i][k] * inv[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        assert prod == [
            [Fraction(int(i == j)) for j in range(n)] for i in range(n)
        ]


def test_kernel_vector():
    # rank-1 system in 2 unknowns: kernel is the perpendicular direction
    v = exact.kernel_vector([[Fraction(1), Fraction(2)]], 2)
    assert v is not None
    assert v[0] * 1 + v[1] * 2 == 0
    assert any(c != 0 for c in v)
    assert exact.kernel_vector([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]], 2) is None


def test_affine_rank():
    pts = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(1)), (Fraction(2), Fraction(2))]
    assert exact.affine_rank(pts) == 1
    pts.append((Fraction(0), Fraction(1)))
    assert exact.affine_rank(pts) == 2
    assert exact.affine_rank([(Fraction(5), Fraction(7))]) == 0


def test_primitive():
    assert exact.primitive((Fraction(2), Fraction(4))) == (1, 2)
    assert exact.primitive((Fraction(-3), Fraction(6))) == (-1, 2)
    # rational input scales to the primitive integer direction
    assert exact.primitive((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
    assert exact.primitive((Fraction(0), Fraction(-5))) == (0, -1)
