"""Dense univariate polynomials and Laurent polynomials over Q.

Coefficients are ``fractions.Fraction`` throughout; no floating point enters
any computation.  ``Poly`` stores coefficients low degree first with a nonzero
trailing coefficient; ``LaurentPoly`` additionally stores the lowest exponent.
Both types are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Polynomial in one variable over Q, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @staticmethod
    def const(c: Scalar) -> "Poly":
        return Poly([c])

    @staticmethod
    def x(power: int = 1) -> "Poly":
        return Poly([0] * power + [1])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __call__(self, x: Scalar) -> Fraction:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db, lb = other.degree(), other.coeffs[-1]
        quo = [_ZERO] * max(0, len(rem) - db)
        for i in range(len(rem) - db - 1, -1, -1):
            c = rem[i + db] / lb
            if c:
                quo[i] = c
                for j, bj in enumerate(other.coeffs):
                    rem[i + j] -= c * bj
        return Poly(quo), Poly(rem)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by x^k, allowing k < 0 (result Laurent)."""
        return LaurentPoly(k, self.coeffs)

    def to_laurent(self) -> "LaurentPoly":
        return LaurentPoly(0, self.coeffs)


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly([x])
    raise TypeError(f"cannot coerce {x!r} to Poly")


class LaurentPoly:
    """Laurent polynomial: coefficient of x^(low+i) at position i."""

    __slots__ = ("low", "coeffs")

    def __init__(self, low: int = 0, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        while cs and cs[-1] == 0:
            cs.pop()
        self.low = (low + lead) if cs else 0
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c: Scalar) -> "LaurentPoly":
        return LaurentPoly(0, [c])

    @staticmethod
    def monomial(c: Scalar, k: int) -> "LaurentPoly":
        return LaurentPoly(k, [c])

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def valuation(self) -> int:
        """Lowest exponent; 0 for the zero polynomial by convention."""
        return self.low

    def degree(self) -> int:
        return self.low + len(self.coeffs) - 1 if self.coeffs else 0

    def coeff(self, k: int) -> Fraction:
        i = k - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly(0, [other])
        elif isinstance(other, Poly):
            other = other.to_laurent()
        return (isinstance(other, LaurentPoly)
                and self.low == other.low and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(("LaurentPoly", self.low, self.coeffs))

    def __repr__(self):
        return f"LaurentPoly({self.low}, {list(self.coeffs)!r})"

    def __add__(self, other) -> "LaurentPoly":
        other = _as_laurent(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        low = min(self.low, other.low)
        hi = max(self.low + len(self.coeffs), other.low + len(other.coeffs))
        return LaurentPoly(low, [self.coeff(k) + other.coeff(k)
                                 for k in range(low, hi)])

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.low, [-c for c in self.coeffs])

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_as_laurent(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _as_laurent(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.low, [c * other for c in self.coeffs])
        other = _as_laurent(other)
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ai in enumerate(self.coeffs):
            if ai:
                for j, bj in enumerate(other.coeffs):
                    out[i + j] += ai * bj
        return LaurentPoly(self.low + other.low, out)

    __rmul__ = __mul__

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ValueError on nonzero remainder."""
        other = _as_laurent(other)
        if other.is_zero():
            raise ZeroDivisionError("Laurent division by zero")
        if self.is_zero():
            return LaurentPoly()
        quo, rem = Poly(self.coeffs).divmod(Poly(other.coeffs))
        if not rem.is_zero():
            raise ValueError("inexact Laurent division")
        return LaurentPoly(self.low - other.low, quo.coeffs)

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by x^k."""
        return LaurentPoly(self.low + k, self.coeffs)

    def theta(self) -> "LaurentPoly":
        """Euler derivative x*d/dx."""
        return LaurentPoly(self.low,
                           [(self.low + i) * c for i, c in enumerate(self.coeffs)])

    def substitute_inverse(self) -> "LaurentPoly":
        """x -> 1/x: reverses exponents."""
        return LaurentPoly(-(self.low + len(self.coeffs) - 1),
                           tuple(reversed(self.coeffs)))

    def __call__(self, x: Scalar) -> Fraction:
        x = Fraction(x)
        if x == 0:
            raise ZeroDivisionError("Laurent polynomial evaluated at 0")
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc * x ** self.low

    def polynomial_part_ok(self) -> bool:
        """True when no negative exponents occur."""
        return self.is_zero() or self.low >= 0

    def to_poly(self) -> Poly:
        if not self.polynomial_part_ok():
            raise ValueError("Laurent polynomial has negative exponents")
        return Poly((0,) * self.low + self.coeffs)


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, Poly):
        return x.to_laurent()
    if isinstance(x, (int, Fraction)):
        return LaurentPoly(0, [x])
    raise TypeError(f"cannot coerce {x!r} to LaurentPoly")
