import random
from fractions import Fraction

import pytest

from irrhodge.poly import LaurentPoly, Poly


def rand_poly(rng, deg=4):
    return Poly([Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                 for _ in range(rng.randint(0, deg))])


def rand_laurent(rng, deg=4):
    return LaurentPoly(rng.randint(-3, 3),
                       [Fraction(rng.randint(-5, 5)) for _ in range(deg)])


def test_trim_and_degree():
    assert Poly([0, 0]).is_zero()
    assert Poly([1, 2, 0]).degree() == 1
    assert Poly().degree() == -1


def test_poly_arithmetic_ring_axioms():
    rng = random.Random(1)
    for _ in range(50):
        a, b, c = (rand_poly(rng) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert a + (-a) == Poly()


def test_divmod_roundtrip():
    rng = random.Random(2)
    for _ in range(50):
        a, b = rand_poly(rng, 6), rand_poly(rng, 4)
        if b.is_zero():
            continue
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.is_zero() or r.degree() < b.degree()


def test_poly_eval_and_derivative():
    p = Poly([1, 2, 3])  # 1 + 2x + 3x^2
    assert p(2) == 17
    assert p.derivative() == Poly([2, 6])


def test_laurent_normalization():
    assert LaurentPoly(2, [0, 0, 1]).low == 4
    assert LaurentPoly(-1, [0, 0]).is_zero()
    assert LaurentPoly(-2, [1, 0, 3]).degree() == 0
    assert LaurentPoly(-2, [1, 0, 3]).valuation() == -2


def test_laurent_arithmetic():
    rng = random.Random(3)
    for _ in range(50):
        a, b = rand_laurent(rng), rand_laurent(rng)
        s = a + b
        for k in range(-8, 8):
            assert s.coeff(k) == a.coeff(k) + b.coeff(k)
        assert a * b == b * a


def test_laurent_exact_division():
    rng = random.Random(4)
    for _ in range(30):
        a, b = rand_laurent(rng), rand_laurent(rng)
        if b.is_zero():
            continue
        assert (a * b).exact_div(b) == a
    with pytest.raises(ValueError):
        LaurentPoly(0, [1, 1]).exact_div(LaurentPoly(0, [1, 1, 1]))


def test_theta_is_euler_derivative():
    p = LaurentPoly(-1, [2, 0, 5])  # 2/x + 5x
    assert p.theta() == LaurentPoly(-1, [-2, 0, 5])


def test_substitute_inverse_involution():
    rng = random.Random(5)
    for _ in range(30):
        a = rand_laurent(rng)
        assert a.substitute_inverse().substitute_inverse() == a
        assert (a * a).substitute_inverse() == \
            a.substitute_inverse() * a.substitute_inverse()


def test_laurent_to_poly_guard():
    assert LaurentPoly(1, [1]).to_poly() == Poly([0, 1])
    with pytest.raises(ValueError):
        LaurentPoly(-1, [1]).to_poly()
