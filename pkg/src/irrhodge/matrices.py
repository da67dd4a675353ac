"""Matrices over Q[x] and Q[x, 1/x], and the polynomial-matrix kernels.

Three algorithms here do the heavy lifting for the whole package:

* ``laurent_inverse`` -- fraction-free Gauss--Jordan (Bareiss) producing the
  exact inverse of a Laurent matrix whose determinant is a monomial.
* ``column_hermite`` -- Hermite column form over Q[v], used to span lattices
  during saturation.
* ``row_reduce_poly`` -- Wolovich row reduction over Q[h]: left-multiplies by
  a unimodular transform until the leading-row-coefficient matrix is
  invertible.  This splits a lattice gluing matrix into Q * diag(h^g) * U with
  Q unimodular over Q[h] and U unimodular over Q[v], which is exactly the
  Birkhoff--Grothendieck decomposition of the glued bundle on P^1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import linalg
from .errors import NotUnitError
from .poly import LaurentPoly, Poly


class _MatrixBase:
    __slots__ = ("entries",)
    _coerce: Callable = None  # set by subclasses
    _zero = None
    _one = None

    def __init__(self, entries: Iterable[Iterable]):
        co = type(self)._coerce
        rows = tuple(tuple(co(e) for e in row) for row in entries)
        if rows:
            width = len(rows[0])
            assert all(len(r) == width for r in rows), "ragged matrix"
        self.entries = rows

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def identity(cls, n: int):
        return cls([[cls._one if i == j else cls._zero for j in range(n)]
                    for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int):
        return cls([[cls._zero] * m for _ in range(n)])

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.entries == other.entries

    def __hash__(self):
        return hash((type(self).__name__, self.entries))

    def __repr__(self):
        return f"{type(self).__name__}({[list(r) for r in self.entries]!r})"

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other):
        return type(self)([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return type(self)([[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return type(self)([[-a for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, _MatrixBase):
            assert self.cols == other.rows, "shape mismatch"
            bt = list(zip(*other.entries))
            return type(self)(
                [[_dot(row, col) for col in bt] for row in self.entries])
        return type(self)([[e * other for e in row] for row in self.entries])

    def __rmul__(self, other):
        return type(self)([[other * e for e in row] for row in self.entries])

    def transpose(self):
        return type(self)(list(zip(*self.entries)) if self.entries else [])

    def map(self, f):
        return type(self)([[f(e) for e in row] for row in self.entries])

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def trace(self):
        acc = type(self)._zero
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc


def _dot(row, col):
    it = iter(zip(row, col))
    a, b = next(it)
    acc = a * b
    for a, b in it:
        acc = acc + a * b
    return acc


def _to_poly(e) -> Poly:
    if isinstance(e, Poly):
        return e
    if isinstance(e, LaurentPoly):
        return e.to_poly()
    if isinstance(e, (list, tuple)):
        return Poly(e)
    return Poly([e]) if e else Poly()


def _to_laurent(e) -> LaurentPoly:
    if isinstance(e, LaurentPoly):
        return e
    if isinstance(e, Poly):
        return e.to_laurent()
    if isinstance(e, (list, tuple)):
        return LaurentPoly(0, e)
    return LaurentPoly(0, [e])


class PolyMatrix(_MatrixBase):
    """Matrix with entries in Q[x]."""

    _coerce = staticmethod(_to_poly)
    _zero = Poly()
    _one = Poly([1])

    def evaluate(self, x) -> linalg.Mat:
        return linalg.mat([[e(x) for e in row] for row in self.entries])

    def derivative(self) -> "PolyMatrix":
        return self.map(lambda e: e.derivative())

    def max_degree(self) -> int:
        return max((e.degree() for row in self.entries for e in row), default=-1)

    def to_laurent(self) -> "LaurentMatrix":
        return LaurentMatrix(self.entries)

    def det(self) -> Poly:
        return _bareiss_det(self.entries, Poly([1]))

    def is_constant(self) -> bool:
        return all(e.degree() <= 0 for row in self.entries for e in row)


class LaurentMatrix(_MatrixBase):
    """Matrix with entries in Q[x, 1/x]."""

    _coerce = staticmethod(_to_laurent)
    _zero = LaurentPoly()
    _one = LaurentPoly(0, [1])

    def min_valuation(self) -> int:
        vals = [e.valuation() for row in self.entries for e in row
                if not e.is_zero()]
        return min(vals, default=0)

    def max_degree(self) -> int:
        degs = [e.degree() for row in self.entries for e in row
                if not e.is_zero()]
        return max(degs, default=0)

    def degree_span(self) -> int:
        return self.max_degree() - self.min_valuation() if self.entries else 0

    def is_polynomial(self) -> bool:
        return self.min_valuation() >= 0

    def coefficient_matrix(self, k: int) -> linalg.Mat:
        return linalg.mat([[e.coeff(k) for e in row] for row in self.entries])

    def theta(self) -> "LaurentMatrix":
        """Entrywise Euler derivative x d/dx."""
        return self.map(lambda e: e.theta())

    def shift(self, k: int) -> "LaurentMatrix":
        mono = LaurentPoly.monomial(1, k)
        return self.map(lambda e: e * mono)

    def evaluate(self, x) -> linalg.Mat:
        return linalg.mat([[e(x) for e in row] for row in self.entries])

    def substitute_inverse(self) -> "LaurentMatrix":
        return self.map(lambda e: e.substitute_inverse())

    def to_poly_matrix(self) -> PolyMatrix:
        return PolyMatrix(self.entries)

    def det(self) -> LaurentPoly:
        return _bareiss_det(self.entries, LaurentPoly(0, [1]))

    def scale_columns(self, powers: Sequence[int]) -> "LaurentMatrix":
        return LaurentMatrix(
            [[e * LaurentPoly.monomial(1, powers[j]) for j, e in enumerate(row)]
             for row in self.entries])

    def scale_rows(self, powers: Sequence[int]) -> "LaurentMatrix":
        return LaurentMatrix(
            [[e * LaurentPoly.monomial(1, powers[i]) for e in row]
             for i, row in enumerate(self.entries)])


def _bareiss_det(entries, one):
    """Fraction-free determinant over an integral domain with exact division."""
    n = len(entries)
    if n == 0:
        return one
    a = [list(row) for row in entries]
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not a[i][k].is_zero()),
                       None)
            if piv is None:
                return one - one  # zero of the ring
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev) if hasattr(num, "exact_div") \
                    else _poly_exact_div(num, prev)
            a[i][k] = type(a[i][k])()
        prev = a[k][k]
    result = a[n - 1][n - 1]
    return result if sign == 1 else -result


def _poly_exact_div(num: Poly, den: Poly) -> Poly:
    quo, rem = num.divmod(den)
    if not rem.is_zero():
        raise ValueError("inexact polynomial division in Bareiss")
    return quo


def laurent_inverse(m: LaurentMatrix) -> LaurentMatrix:
    """Exact inverse of a Laurent matrix.

    Requires det(m) to be a unit of Q[x, 1/x], i.e. a nonzero monomial;
    raises NotUnitError otherwise.
    """
    assert m.rows == m.cols, "inverse of non-square matrix"
    d = m.det()
    if d.is_zero() or not d.is_monomial():
        raise NotUnitError(
            f"determinant {d!r} is not a monomial; not a lattice basis")
    n = m.rows
    # Solve m * X = I by Gauss-Jordan over the fraction field, done
    # fraction-free: eliminate with cross-multiplication, divide at the end.
    aug = [[m.entries[i][j] for j in range(n)]
           + [LaurentMatrix._one if i == j else LaurentMatrix._zero
              for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if not aug[i][col].is_zero()),
                   None)
        if piv is None:  # unreachable: det is a unit
            raise NotUnitError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pval = aug[col][col]
        for i in range(n):
            if i != col and not aug[i][col].is_zero():
                f = aug[i][col]
                aug[i] = [pval * a - f * b for a, b in zip(aug[i], aug[col])]
    # Left block is now diagonal; divide each row by its diagonal entry.
    # Every division is exact because the product of the diagonal equals the
    # determinant, a unit, times the entries of the true inverse.
    out = []
    for i in range(n):
        di = aug[i][i]
        row = []
        for j in range(n):
            row.append(aug[i][n + j].exact_div(di))
        out.append(row)
    inv = LaurentMatrix(out)
    return inv


def kronecker(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """a (x) I + I (x) b in the i-major product basis e_i (x) f_j.

    This is the action matrix of a derivation on a tensor product, not the
    multiplicative Kronecker product.
    """
    assert a.rows == a.cols and b.rows == b.cols, "kronecker needs square input"
    ra, rb = a.rows, b.rows
    n = ra * rb
    zero = Poly()
    out = [[zero] * n for _ in range(n)]
    for i in range(ra):
        for k in range(ra):
            e = a.entries[i][k]
            if not e.is_zero():
                for j in range(rb):
                    out[i * rb + j][k * rb + j] = out[i * rb + j][k * rb + j] + e
    for j in range(rb):
        for l in range(rb):
            e = b.entries[j][l]
            if not e.is_zero():
                for i in range(ra):
                    out[i * rb + j][i * rb + l] = out[i * rb + j][i * rb + l] + e
    return PolyMatrix(out)


def column_hermite(columns: Sequence[Sequence[Poly]]) -> list[tuple[Poly, ...]]:
    """Hermite basis of the Q[v]-column span of full-row-rank generators.

    Returns r columns forming a lower-triangular matrix with monic diagonal
    and off-diagonal entries reduced modulo the diagonal; deterministic.
    """
    cols = [list(c) for c in columns]
    r = len(cols[0]) if cols else 0
    basis: list[list[Poly]] = []
    for row in range(r):
        active = [c for c in cols if any(not e.is_zero() for e in c[row:])]
        # euclidean reduction on the entries in this row
        live = [c for c in active if not c[row].is_zero()]
        rest = [c for c in active if c[row].is_zero()]
        while len(live) > 1:
            live.sort(key=lambda c: c[row].degree())
            small = live[0]
            new_live = [small]
            for c in live[1:]:
                q, _ = c[row].divmod(small[row])
                reduced = [ce - q * se for ce, se in zip(c, small)]
                if reduced[row].is_zero():
                    rest.append(reduced)
                else:
                    new_live.append(reduced)
            live = new_live
        if not live:
            raise ValueError("generators do not have full row rank")
        pivot = live[0]
        lead = pivot[row].coeffs[-1]
        pivot = [e * (1 / lead) for e in pivot]
        basis.append(pivot)
        cols = rest
    # reduce off-diagonal entries: for j < i, shrink basis[j][i] mod basis[i][i]
    for i in range(r):
        for j in range(i):
            q, _ = basis[j][i].divmod(basis[i][i])
            if not q.is_zero():
                basis[j] = [bj - q * bi for bj, bi in zip(basis[j], basis[i])]
    return [tuple(c) for c in basis]


def row_reduce_poly(s: PolyMatrix) -> tuple[PolyMatrix, PolyMatrix, list[int]]:
    """Row reduction of a nonsingular polynomial matrix over Q[h].

    Returns (q, reduced, row_degrees) with s = q * reduced, q unimodular over
    Q[h], and the leading-row-coefficient matrix of ``reduced`` invertible.
    """
    n = s.rows
    assert n == s.cols, "row reduction needs a square matrix"
    rows = [list(r) for r in s.entries]
    q = [[Poly([1]) if i == j else Poly() for j in range(n)] for i in range(n)]

    def row_deg(row):
        return max((e.degree() for e in row), default=-1)

    guard = 0
    max_steps = sum(max(row_deg(r), 0) for r in rows) * n + n + 1
    while True:
        guard += 1
        if guard > max_steps + 1:
            raise RuntimeError("row reduction failed to terminate")
        degs = [row_deg(r) for r in rows]
        if any(d < 0 for d in degs):
            raise ValueError("row reduction of a singular matrix")
        lead = [[r[j][degs[i]] for j in range(n)]
                for i, r in enumerate(rows)]
        null = linalg.nullspace(linalg.transpose(linalg.mat(lead)))
        if not null:
            break
        lam = null[0]
        support = [i for i in range(n) if lam[i] != 0]
        target = max(support, key=lambda i: (degs[i], i))
        d_t = degs[target]
        new_row = [Poly()] * n
        qcol = [Poly()] * n
        for i in support:
            mono = Poly([0] * (d_t - degs[i]) + [lam[i]])
            for j in range(n):
                new_row[j] = new_row[j] + mono * rows[i][j]
        # q update: s = q * rows is preserved.  The op replaces
        # row_t <- sum_i lam_i h^(dt-di) row_i, so column t of q becomes
        # (1/lam_t) * (old col t), and old col t spreads to the others.
        inv = 1 / lam[target]
        for i in range(n):
            old_col_t = q[i][target]
            q[i][target] = old_col_t * inv
            for k in support:
                if k != target:
                    mono = Poly([0] * (d_t - degs[k]) + [lam[k]])
                    q[i][k] = q[i][k] - (mono * old_col_t) * inv
        rows[target] = new_row
    degs = [row_deg(r) for r in rows]
    return PolyMatrix(q), PolyMatrix(rows), degs
