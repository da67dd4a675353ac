import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest

from irrhodge.connection import (FilteredSpace, direct_sum, dual,
                                 exponential_twist, fiber,
                                 from_filtered_space, hypergeometric,
                                 make_connection, tate_twist, tensor, trivial,
                                 wedge)
from irrhodge.errors import BadAlphaError, BadFiltrationError, ShapeError
from irrhodge.matrices import PolyMatrix, kronecker
from irrhodge.poly import Poly


def rand_connection(rng, rank, deg=1):
    return make_connection(rank, [[Poly([rng.randint(-2, 2)
                                         for _ in range(deg + 1)])
                                   for _ in range(rank)]
                                  for _ in range(rank)])


def test_make_connection_shape_error():
    with pytest.raises(ShapeError):
        make_connection(2, [[Poly()] * 3 for _ in range(3)])


def test_trivial_and_rank_one():
    assert trivial(1).action == PolyMatrix([[Poly()]])
    c = make_connection(1, [[Poly([-1])]])
    assert c.action.entries[0][0](1) == -1


def test_tensor_rank_one_adds():
    a = make_connection(1, [[Poly([0, 3])]])
    b = make_connection(1, [[Poly([0, 4])]])
    assert tensor(a, b).action == PolyMatrix([[Poly([0, 7])]])


def test_tensor_unit():
    m = hypergeometric((0, 0))
    assert tensor(trivial(1), m).action == m.action
    assert tensor(m, trivial(1)).action == m.action


def test_tensor_associative_up_to_reindex():
    rng = random.Random(30)
    a, b, c = (rand_connection(rng, 2) for _ in range(3))
    left = tensor(tensor(a, b), c)
    right = tensor(a, tensor(b, c))
    # i-major ordering makes both sides literally equal
    assert left.action == right.action


def test_dual_examples():
    c = make_connection(1, [[Poly([0, 5])]])
    assert dual(c).action == PolyMatrix([[Poly([0, -5])]])
    m = hypergeometric((0, Fraction(1, 2)))
    assert dual(dual(m)).action == m.action
    n = make_connection(2, [[Poly(), Poly([0, 1])], [Poly(), Poly()]])
    assert dual(n).action == PolyMatrix(
        [[Poly(), Poly()], [Poly([0, -1]), Poly()]])


def test_dual_tensor_compatibility():
    rng = random.Random(31)
    a, b = rand_connection(rng, 2), rand_connection(rng, 2)
    assert dual(tensor(a, b)).action == \
        kronecker(dual(a).action, dual(b).action)


def test_wedge_top_is_trace():
    rng = random.Random(32)
    m = rand_connection(rng, 3)
    top = wedge(m, 3)
    assert top.rank == 1
    assert top.action.entries[0][0] == m.action.trace()


def test_wedge_rank_one_identity():
    m = hypergeometric((0, 0))
    assert wedge(m, 1).action == m.action


def test_wedge_diagonal():
    m = make_connection(2, [[Poly([0, 2]), Poly()], [Poly(), Poly([0, 5])]])
    assert wedge(m, 2).action == PolyMatrix([[Poly([0, 7])]])


def test_wedge_out_of_range():
    with pytest.raises(ShapeError):
        wedge(trivial(2), 3)


def test_wedge_conjugate_to_antisymmetric_block():
    """The wedge action is the restriction of the r-fold derivation power
    to antisymmetrized tensors, via the inclusion map."""
    rng = random.Random(33)
    for rank, r in [(3, 2), (4, 2), (4, 3)]:
        m = rand_connection(rng, rank)
        w = wedge(m, r)
        power = m.action
        for _ in range(r - 1):
            power = kronecker(power, m.action)
        tuples = list(combinations(range(rank), r))
        incl = [[Poly() for _ in tuples] for _ in range(rank ** r)]
        for col, tup in enumerate(tuples):
            for perm in permutations(range(r)):
                sign = _perm_sign_list(perm)
                flat = 0
                for pos in range(r):
                    flat = flat * rank + tup[perm[pos]]
                incl[flat][col] = incl[flat][col] + Poly([sign])
        incl_m = PolyMatrix(incl)
        assert power * incl_m == incl_m * w.action


def _perm_sign_list(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def test_direct_sum_blocks():
    a = make_connection(1, [[Poly([1])]])
    b = make_connection(2, [[Poly(), Poly([2])], [Poly([3]), Poly()]])
    s = direct_sum(a, b)
    assert s.rank == 3
    assert s.action.entries[0][0] == Poly([1])
    assert s.action.entries[1][2] == Poly([2])
    assert s.action.entries[0][1] == Poly()


def test_tate_twist():
    assert tate_twist(trivial(1), 1).action == PolyMatrix([[Poly([0, 1])]])
    m = hypergeometric((0, 0))
    assert tate_twist(tate_twist(m, 2), -2).action == m.action


def test_exponential_twist():
    assert exponential_twist(trivial(1), 1).action == PolyMatrix([[Poly([-1])]])
    m = hypergeometric((0, 0))
    assert exponential_twist(m, 0).action == m.action


def test_hypergeometric_matrices():
    # mu = 1, alpha = (0): A = [-1]
    assert hypergeometric((0,)).action == PolyMatrix([[Poly([-1])]])
    # mu = 2, alpha = (0,0): A = -2 [[0,1],[1,0]] + h diag(0,1)
    m = hypergeometric((0, 0))
    assert m.action == PolyMatrix([[Poly(), Poly([-2])],
                                   [Poly([-2]), Poly([0, 1])]])
    # sigma_k = k + mu alpha_k
    m2 = hypergeometric((0, Fraction(1, 2)))
    assert m2.action.entries[1][1] == Poly([0, 2])


def test_hypergeometric_nondegenerate_at_zero():
    for alpha in [(0,), (0, 0), (0, Fraction(1, 2)),
                  (0, Fraction(1, 3), Fraction(2, 3))]:
        m = hypergeometric(alpha)
        mu = m.rank
        a0 = m.action.evaluate(0)
        det = _det(a0)
        assert abs(det) == mu ** mu


def _det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        total += (-1) ** j * mat[0][j] * _det(minor)
    return total


def test_hypergeometric_validation():
    with pytest.raises(BadAlphaError):
        hypergeometric(())
    with pytest.raises(BadAlphaError):
        hypergeometric((Fraction(1, 2), 0))
    with pytest.raises(BadAlphaError):
        hypergeometric((0, 1))


def test_filtered_space_embedding():
    fs = FilteredSpace.from_jumps({
        0: [(1, 0, 0), (0, 1, 0)],
        1: [(1, 0, 0), (0, 1, 0), (0, 0, 1)]})
    c = from_filtered_space(fs)
    assert c.action == PolyMatrix(
        [[Poly(), Poly(), Poly()],
         [Poly(), Poly(), Poly()],
         [Poly(), Poly(), Poly([0, 1])]])


def test_filtered_space_one_dim():
    fs = FilteredSpace.from_jumps({0: [(1,)]})
    assert from_filtered_space(fs).action == trivial(1).action


def test_filtered_space_rejects_non_integer():
    fs = FilteredSpace.from_jumps({Fraction(1, 2): [(1,)]})
    with pytest.raises(BadFiltrationError):
        from_filtered_space(fs)


def test_filtered_space_monotonicity_guard():
    with pytest.raises(BadFiltrationError):
        FilteredSpace.from_jumps({0: [(1, 0)], 1: [(0, 1)]})


def test_fiber_evaluation():
    f = fiber(trivial(3))
    assert f.dimension == 3
    assert fiber(trivial(2)).evaluate(
        (Poly([0, 0, 1]), Poly([1, -1]))) == (1, 0)
