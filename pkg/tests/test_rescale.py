from fractions import Fraction

import pytest

from irrhodge.connection import (direct_sum, hypergeometric, make_connection,
                                 tate_twist, trivial)
from irrhodge.errors import WindowError
from irrhodge.hodge import analyze, spectrum
from irrhodge.matrices import PolyMatrix
from irrhodge.poly import Poly
from irrhodge.rescale import (RescaledVPiece, check_nilpotency,
                              check_strictness, grading_oracle,
                              grading_oracle_full, rescale_module,
                              rescaled_dual_check, rescaled_v_piece)


def filtered(levels):
    n = len(levels)
    rows = [[Poly([0, sorted(levels)[i]]) if i == j else Poly()
             for j in range(n)] for i in range(n)]
    return make_connection(n, PolyMatrix(rows))


def test_action_relations_at_degree_zero():
    """The three defining lines of the rescaled structure at 1 (x) m."""
    m = make_connection(1, [[Poly([-1])]])
    resc = rescale_module(m, 2)
    e = (Poly([1]),)
    # h (1 (x) e) = tau (x) h e
    k, x = resc.apply_hbar(0, e)
    assert k == 1 and x == (Poly([0, 1]),)
    # dbar_tau (1 (x) e) = -1 (x) h^2 d/dh e = +1 (x) e
    k, x = resc.apply_dtau(0, e)
    assert k == 0 and x == (Poly([1]),)
    # h^2 d/dh (1 (x) e) = tau (x) h^2 d/dh e
    k, x = resc.apply_h2dh(0, e)
    assert k == 1 and x == (Poly([-1]),)


def test_dtau_trivial_at_zero_and_leibniz():
    resc = rescale_module(trivial(1), 2)
    e = (Poly([1]),)
    assert resc.apply_dtau(0, e)[1] == (Poly(),)
    # at tau-degree k the Euler term k h m appears
    assert resc.apply_dtau(2, e)[1] == (Poly([0, 2]),)


def test_window_bounds():
    resc = rescale_module(trivial(1), 2)
    with pytest.raises(WindowError):
        resc.apply_hbar(2, (Poly([1]),))
    assert resc.is_boundary(2) and not resc.is_boundary(1)


def test_rescaled_v_piece_trivial():
    m = trivial(1)
    vf = analyze(m).vf
    piece = rescaled_v_piece(m, vf, Fraction(0), 2)
    assert piece.degree_dims() == {-2: 0, -1: 0, 0: 1, 1: 2, 2: 3}
    shifted = rescaled_v_piece(m, vf, Fraction(-1), 2)
    assert shifted.degree_dims() == {-2: 0, -1: 0, 0: 0, 1: 1, 2: 2}


def test_rescaled_v_piece_hypergeometric():
    m = hypergeometric((0, 0))
    vf = analyze(m).vf
    piece = rescaled_v_piece(m, vf, Fraction(0), 3)
    dims = piece.degree_dims()
    # spectral values {0,1}: dim V_k cap M counts sections below k
    assert dims[0] == 1 and dims[1] == 3 and dims[2] == 5


def test_nilpotency_positive():
    m = filtered([0, 1])
    vf = analyze(m).vf
    piece = rescaled_v_piece(m, vf, Fraction(0), 3)
    assert check_nilpotency(m, vf, piece, vf.nilpotency_bound + 1)


def test_nilpotency_negative_control():
    m = filtered([0, 1])
    vf = analyze(m).vf
    piece = rescaled_v_piece(m, vf, Fraction(0), 3)
    # corrupt the piece: put a generator of V_1 in tau-degree 0
    from irrhodge.rescale import section_dims_direct
    _, basis1, _ = section_dims_direct(m, vf, Fraction(1))
    bad = []
    for k, vecs in piece.generators:
        if k == 0:
            bad.append((k, tuple(basis1)))
        else:
            bad.append((k, vecs))
    corrupted = RescaledVPiece(piece.beta, tuple(bad))
    assert not check_nilpotency(m, vf, corrupted, vf.nilpotency_bound + 1)


def test_nilpotency_window_too_small():
    m = filtered([0, 1])
    vf = analyze(m).vf
    piece = rescaled_v_piece(m, vf, Fraction(0), 2)
    with pytest.raises(WindowError):
        check_nilpotency(m, vf, piece, 5)


def test_strictness_positive():
    for m in (trivial(1), filtered([0, 1]), hypergeometric((0, 0)),
              hypergeometric((0, Fraction(1, 2)))):
        assert check_strictness(m, analyze(m).vf)


def test_strictness_negative_control():
    """The kernel comparison underlying the check detects corrupted data.

    In the library's lattice representation V_<(gamma-1) = v V_<gamma holds
    by construction, so the checker is fed deliberately desynchronized
    membership systems here: the kernel against the wrong level differs and
    the comparison reports it.
    """
    from irrhodge.linalg import column_span_rref
    from irrhodge.rescale import _membership_kernel, section_dims_direct
    m = hypergeometric((0, 0))
    vf = analyze(m).vf
    _, basis, _ = section_dims_direct(m, vf, Fraction(1))
    from irrhodge.poly import Poly as P
    h = P([0, 1])
    kernel_good = _membership_kernel(
        [[h * p for p in vec] for vec in basis], vf, Fraction(2), strict=True)
    kernel_bad = _membership_kernel(
        [[h * p for p in vec] for vec in basis], vf, Fraction(1), strict=True)
    assert column_span_rref(kernel_good) != column_span_rref(kernel_bad)


def test_grading_oracle_examples():
    assert grading_oracle(trivial(1), 0).entries == ((Fraction(0), 1),)
    assert grading_oracle(filtered([0, 0, 1]), 0).entries == \
        ((Fraction(0), 2), (Fraction(1), 1))
    m = hypergeometric((0, Fraction(1, 2)))
    assert grading_oracle_full(m).entries == spectrum(m).entries


def test_grading_oracle_off_class_is_empty():
    m = trivial(1)
    assert grading_oracle(m, Fraction(1, 3)).entries == ()


def test_grading_oracle_window_monotone():
    m = hypergeometric((0, 0))
    small = grading_oracle(m, 0, window=4)
    large = grading_oracle(m, 0, window=6)
    assert small.entries == large.entries


def test_oracle_equivalence_master():
    cases = [trivial(2), filtered([-1, 0, 1]), tate_twist(trivial(1), -2),
             hypergeometric((0, 0)),
             direct_sum(make_connection(1, [[Poly([0, Fraction(1, 2)])]]),
                        filtered([0, 1]))]
    for m in cases:
        assert grading_oracle_full(m).entries == spectrum(m).entries


def test_rescaled_dual_check_ranks():
    assert rescaled_dual_check(make_connection(1, [[Poly([0, 2])]]), 3)
    assert rescaled_dual_check(hypergeometric((0, 0)), 3)


def test_rescaled_dual_negative_control():
    from irrhodge.rescale import _dual_pairing_ok
    m = hypergeometric((0, 0))
    resc = rescale_module(m, 3)
    # wrong sign in the would-be dual action
    bad = make_connection(2, [list(r) for r in m.action.transpose().entries])
    resc_bad = rescale_module(bad, 3)
    basis = [tuple(Poly([1]) if i == j else Poly() for j in range(2))
             for i in range(2)]
    assert any(not _dual_pairing_ok(resc, resc_bad, 0, 0, y, x)
               for y in basis for x in basis)
