import random

import pytest

from skewplus.errors import NotSquare, ShapeMismatch, Singular
from skewplus.fields import Field
from skewplus.matrices import Matrix, PermutationMap
from skewplus.symplectic import psi_matrix

Q = Field.rationals()


def rand_matrix(rng, n, m=None, bound=6):
    m = n if m is None else m
    return Matrix(Q, [[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)])


def det_cofactor(m):
    """Independent determinant oracle: first-row cofactor expansion."""
    n = m.rows
    if n == 0:
        return m.field.one()
    if n == 1:
        return m.entry(1, 1)
    total = m.field.zero()
    for j in range(1, n + 1):
        minor = m.submatrix(range(2, n + 1), [c for c in range(1, n + 1) if c != j])
        term = m.entry(1, j) * det_cofactor(minor)
        total = total + term if j % 2 == 1 else total - term
    return total


def test_det_against_cofactor_oracle():
    rng = random.Random(5)
    for n in range(0, 6):
        for _ in range(20):
            m = rand_matrix(rng, n)
            assert m.det() == det_cofactor(m)


def test_det_identity_and_psi():
    assert Matrix.identity(Q, 4).det() == Q.one()
    assert psi_matrix(Q, 2).det() == Q.one()


def test_det_multiplicative():
    rng = random.Random(6)
    for _ in range(200):
        n = rng.randint(1, 6)
        a, b = rand_matrix(rng, n), rand_matrix(rng, n)
        assert (a * b).det() == a.det() * b.det()


def test_solve_identity_and_psi():
    b = Matrix.column(Q, [3, -5])
    assert Matrix.identity(Q, 2).solve(b) == b
    # psi_2 x = e1 has solution e2: psi_2 e2 = e1
    psi = psi_matrix(Q, 2)
    x = psi.solve(Matrix.column(Q, [1, 0]))
    assert x == Matrix.column(Q, [0, 1])
    assert psi * x == Matrix.column(Q, [1, 0])


def test_solve_round_trip():
    rng = random.Random(7)
    done = 0
    while done < 30:
        n = rng.randint(1, 6)
        a = rand_matrix(rng, n)
        if a.det().is_zero():
            continue
        b = rand_matrix(rng, n, 1)
        assert a * a.solve(b) == b
        done += 1


def test_inverse():
    psi = psi_matrix(Q, 2)
    assert psi.inverse() == -psi
    assert psi * psi.inverse() == Matrix.identity(Q, 2)
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(1, 5)
        a = rand_matrix(rng, n)
        if a.det().is_zero():
            with pytest.raises(Singular):
                a.inverse()
        else:
            assert a * a.inverse() == Matrix.identity(Q, n)


def test_rank():
    cols = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]
    assert Matrix.from_columns(Q, cols).rank() == 3
    assert Matrix.zeros(Q, 3, 4).rank() == 0


def test_rank_permutation_invariant():
    rng = random.Random(9)
    for _ in range(30):
        m = rand_matrix(rng, 4, 5)
        rp = list(range(1, 5))
        rng.shuffle(rp)
        cp = list(range(1, 6))
        rng.shuffle(cp)
        permuted = m.apply_permutation(PermutationMap(rp), "rows") \
                    .apply_permutation(PermutationMap(cp), "cols")
        assert permuted.rank() == m.rank()


def test_apply_permutation_identity():
    rng = random.Random(10)
    m = rand_matrix(rng, 4)
    assert m.apply_permutation(PermutationMap.identity(4)) == m


def test_nullspace():
    m = Matrix(Q, [[1, 2, 3], [2, 4, 6]])
    basis = m.nullspace()
    assert len(basis) == 2
    zero = Matrix.zeros(Q, 2, 1)
    for v in basis:
        assert m * Matrix.column(Q, v) == zero


def test_solve_any_underdetermined():
    m = Matrix(Q, [[1, 2, 3], [0, 1, 1]])
    b = Matrix.column(Q, [6, 2])
    x = m.solve_any(b)
    assert m * x == b
    inconsistent = Matrix(Q, [[1, 1], [2, 2]])
    with pytest.raises(Singular):
        inconsistent.solve_any(Matrix.column(Q, [1, 3]))


def test_shape_errors():
    with pytest.raises(NotSquare):
        Matrix.zeros(Q, 2, 3).det()
    with pytest.raises(ShapeMismatch):
        Matrix.zeros(Q, 2, 3) * Matrix.zeros(Q, 2, 3)


def test_json_round_trip():
    rng = random.Random(11)
    for field in (Q, Field.prime(7), Field.function_field(2)):
        m = Matrix(field, [[field.sample(rng, 5) for _ in range(3)] for _ in range(2)])
        assert Matrix.from_json(m.to_json()) == m


def test_one_based_entry():
    m = Matrix(Q, [[1, 2], [3, 4]])
    assert m.entry(1, 2) == Q.scalar(2)
    assert m.entry(2, 1) == Q.scalar(3)
