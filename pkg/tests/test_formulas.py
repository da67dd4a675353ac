import random
from fractions import Fraction
from math import comb

import pytest

from irrhodge.connection import hypergeometric, make_connection, tensor
from irrhodge.errors import ShapeError
from irrhodge.formulas import (HypergeomParams, convolve_spectra,
                               grassmannian_d, hypergeom_rank,
                               hypergeom_spectrum, verify_hypergeom,
                               wedge_spectrum)
from irrhodge.hodge import Spectrum, spectrum
from irrhodge.poly import Poly


def spec(*jumps):
    return Spectrum.from_jumps([Fraction(j) for j in jumps])


def test_hypergeom_params():
    p = HypergeomParams.from_alpha((0, Fraction(1, 2)))
    assert p.mu == 2 and p.sigma == (Fraction(0), Fraction(2))


def test_hypergeom_rank_examples():
    p1 = HypergeomParams.from_alpha((0,))
    assert hypergeom_rank(p1, 0) == 1
    assert hypergeom_rank(p1, Fraction(-1, 2)) == 0
    p2 = HypergeomParams.from_alpha((0, 0))
    assert hypergeom_rank(p2, 1) == 2
    p3 = HypergeomParams.from_alpha((0, Fraction(1, 2)))
    assert hypergeom_rank(p3, 1) == 1


def test_hypergeom_spectrum_examples():
    assert hypergeom_spectrum(HypergeomParams.from_alpha((0,) * 4)).entries \
        == tuple((Fraction(k), 1) for k in range(4))
    assert hypergeom_spectrum(
        HypergeomParams.from_alpha((0, Fraction(1, 2)))).entries == \
        ((Fraction(0), 1), (Fraction(2), 1))
    assert hypergeom_spectrum(
        HypergeomParams.from_alpha((Fraction(1, 3), Fraction(1, 3)))).entries \
        == ((Fraction(2, 3), 1), (Fraction(5, 3), 1))


def test_convolve_examples():
    s = convolve_spectra(spec(0, 1), spec(0, 1))
    assert s.entries == ((Fraction(0), 1), (Fraction(1), 2), (Fraction(2), 1))
    assert convolve_spectra(spec(5), spec(0, 1, 1)).entries == \
        ((Fraction(5), 1), (Fraction(6), 2))
    assert convolve_spectra(spec(0, 1), spec(0, 2, 2)).mass == 6


def test_convolve_algebra():
    rng = random.Random(60)
    for _ in range(10):
        a = spec(*[rng.randint(-2, 2) for _ in range(3)])
        b = spec(*[Fraction(rng.randint(-4, 4), 2) for _ in range(2)])
        c = spec(*[rng.randint(0, 3) for _ in range(2)])
        assert convolve_spectra(a, b).entries == convolve_spectra(b, a).entries
        assert convolve_spectra(convolve_spectra(a, b), c).entries == \
            convolve_spectra(a, convolve_spectra(b, c)).entries
        assert convolve_spectra(a, spec(0)).entries == a.entries


def test_wedge_spectrum_examples():
    w = wedge_spectrum(spec(0, 1, 2, 3), 2)
    assert w.entries == ((Fraction(1), 1), (Fraction(2), 1), (Fraction(3), 2),
                         (Fraction(4), 1), (Fraction(5), 1))
    s = spec(0, Fraction(1, 2), 3)
    assert wedge_spectrum(s, 3).entries == ((Fraction(7, 2), 1),)
    assert wedge_spectrum(s, 1).entries == s.entries
    with pytest.raises(ShapeError):
        wedge_spectrum(s, 4)


def test_wedge_spectrum_mass():
    s = spec(0, 1, 2, 3, 4)
    for r in range(1, 6):
        assert wedge_spectrum(s, r).mass == comb(5, r)


def test_grassmannian_examples():
    assert grassmannian_d(2, 3) == [(1, 1), (2, 1), (3, 2), (4, 1), (5, 1)]
    assert grassmannian_d(1, 4) == [(p, 1) for p in range(5)]
    assert sum(d for _, d in grassmannian_d(2, 3)) == comb(4, 2)
    with pytest.raises(ShapeError):
        grassmannian_d(5, 3)


def test_grassmannian_matches_wedge():
    for r, n in [(2, 3), (2, 4), (3, 4)]:
        w = wedge_spectrum(spec(*range(n + 1)), r)
        assert [(int(j), m) for j, m in w.entries] == grassmannian_d(r, n)


def test_tensor_spectrum_is_convolution():
    pairs = [
        (hypergeometric((0, 0)), hypergeometric((0, 0))),
        (hypergeometric((0, 0)), make_connection(1, [[Poly([0, 2])]])),
        (hypergeometric((0, Fraction(1, 2))),
         make_connection(1, [[Poly([0, Fraction(1, 3)])]])),
    ]
    for a, b in pairs:
        assert spectrum(tensor(a, b)).entries == \
            convolve_spectra(spectrum(a), spectrum(b)).entries


def test_verify_hypergeom_integer_alpha():
    for alpha in [(0,), (0, 0), (0, 0, 0, 0)]:
        rep = verify_hypergeom(alpha)
        assert rep.matches and rep.sign == 1 and rep.shift == 0


def test_verify_hypergeom_reports_fractional_mismatch():
    """The printed sigma formula describes the Hodge-normalized lattice;
    the matrix model's own lattice computes a genuinely different shape for
    fractional alpha, and the report says so rather than fudging."""
    rep = verify_hypergeom((0, Fraction(1, 2)))
    assert not rep.matches
    assert rep.computed.entries == ((Fraction(1), 2),)
    assert rep.formula.entries == ((Fraction(0), 1), (Fraction(2), 1))
    # the determinant-level invariant still agrees: equal mass and mean
    assert rep.computed.mass == rep.formula.mass
    assert sum(j * m for j, m in rep.computed.entries) == \
        sum(j * m for j, m in rep.formula.entries)
