import random

import pytest

from irrhodge.errors import NotUnitError
from irrhodge.matrices import (LaurentMatrix, PolyMatrix, column_hermite,
                               kronecker, laurent_inverse, row_reduce_poly)
from irrhodge.poly import LaurentPoly, Poly


def rand_laurent_unit(rng, n):
    """Random lattice basis change: triangular with monomial diagonal."""
    ent = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        ent[i][i] = LaurentPoly.monomial(rng.choice([1, -1, 2]),
                                         rng.randint(-2, 2))
        for j in range(i):
            ent[i][j] = LaurentPoly(rng.randint(-2, 0),
                                    [rng.randint(-3, 3) for _ in range(3)])
    perm = list(range(n))
    rng.shuffle(perm)
    return LaurentMatrix([[ent[i][perm[j]] for j in range(n)]
                          for i in range(n)])


def test_kronecker_scalars_add():
    a = PolyMatrix([[Poly([0, 1])]])       # h
    b = PolyMatrix([[Poly([0, 2])]])       # 2h
    assert kronecker(a, b) == PolyMatrix([[Poly([0, 3])]])


def test_kronecker_zero_blocks():
    a = PolyMatrix.zeros(2, 2)
    b = PolyMatrix([[Poly([1])]])
    out = kronecker(a, b)
    assert out == PolyMatrix([[Poly([1]), Poly()], [Poly(), Poly([1])]])


def test_kronecker_swap_conjugate():
    rng = random.Random(20)
    a = PolyMatrix([[Poly([rng.randint(-2, 2) for _ in range(2)])
                     for _ in range(2)] for _ in range(2)])
    b = PolyMatrix([[Poly([rng.randint(-2, 2) for _ in range(2)])
                     for _ in range(3)] for _ in range(3)])
    kab = kronecker(a, b)
    kba = kronecker(b, a)
    n = 6
    # basis swap permutation: e_i (x) f_j  ->  f_j (x) e_i
    perm = [[Poly() for _ in range(n)] for _ in range(n)]
    for i in range(2):
        for j in range(3):
            perm[j * 2 + i][i * 3 + j] = Poly([1])
    p = PolyMatrix(perm)
    assert kba * p == p * kab


def test_laurent_inverse_examples():
    m = LaurentMatrix([[LaurentPoly.monomial(1, 1), LaurentPoly()],
                       [LaurentPoly(), LaurentPoly.monomial(1, -1)]])
    inv = laurent_inverse(m)
    assert inv == LaurentMatrix([[LaurentPoly.monomial(1, -1), LaurentPoly()],
                                 [LaurentPoly(), LaurentPoly.monomial(1, 1)]])
    m2 = LaurentMatrix([[1, LaurentPoly.monomial(1, 1)], [0, 1]])
    inv2 = laurent_inverse(m2)
    assert inv2 == LaurentMatrix([[1, LaurentPoly.monomial(-1, 1)], [0, 1]])
    with pytest.raises(NotUnitError):
        laurent_inverse(LaurentMatrix([[1, 1], [1, 1]]))


def test_laurent_inverse_property():
    rng = random.Random(21)
    for _ in range(20):
        n = rng.randint(1, 4)
        m = rand_laurent_unit(rng, n)
        inv = laurent_inverse(m)
        assert inv * m == LaurentMatrix.identity(n)
        assert m * inv == LaurentMatrix.identity(n)


def test_column_hermite_spans_lattice():
    v = Poly([0, 1])
    cols = [(Poly([1]), Poly()), (v * v, v), (Poly(), v * v * v)]
    basis = column_hermite(cols)
    assert len(basis) == 2
    t = LaurentMatrix(list(zip(*basis)))
    tinv = laurent_inverse(t)
    # every generator lies in the span with polynomial coordinates
    for col in cols:
        coords = tinv * LaurentMatrix([[col[0]], [col[1]]])
        assert coords.is_polynomial()


def test_row_reduce_poly_witnesses():
    rng = random.Random(22)
    for _ in range(15):
        n = rng.randint(1, 4)
        while True:
            s = PolyMatrix([[Poly([rng.randint(-3, 3) for _ in range(3)])
                             for _ in range(n)] for _ in range(n)])
            if not s.det().is_zero():
                break
        q, reduced, degs = row_reduce_poly(s)
        assert q * reduced == s
        assert q.det().degree() == 0
        lead = [[reduced.entries[i][j][degs[i]] for j in range(n)]
                for i in range(n)]
        from irrhodge import linalg
        assert linalg.rank(lead) == n
