"""Exact dense linear algebra over Q.

Matrices are sequences of sequences of ``Fraction``; every function returns
fresh data and never mutates its input.  The nullspace basis is the canonical
echelon complement (free variables get unit coordinates in increasing column
order) so results are reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = tuple[Fraction, ...]
Mat = tuple[Row, ...]


def mat(rows) -> Mat:
    return tuple(tuple(Fraction(c) for c in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n))
                 for i in range(n))


def zeros(n: int, m: int) -> Mat:
    return tuple((Fraction(0),) * m for _ in range(n))


def shape(m: Mat) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k = shape(a)
    k2, p = shape(b)
    assert k == k2, "shape mismatch"
    bt = list(zip(*b)) if b else []
    return tuple(tuple(sum(ra[s] * col[s] for s in range(k)) for col in bt)
                 for ra in a)


def mat_vec(a: Mat, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Mat, c) -> Mat:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a)) if a else ()


def row_reduce(m) -> tuple[Mat, tuple[int, ...], int]:
    """Reduced row echelon form.

    Returns (rref, pivot columns, rank).  Deterministic: the pivot in each
    column is the first nonzero entry below the previous pivot row.
    """
    rows = [list(map(Fraction, r)) for r in m]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots: list[int] = []
    pr = 0
    for pc in range(nc):
        pivot_row = None
        for i in range(pr, nr):
            if rows[i][pc] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
        inv = 1 / rows[pr][pc]
        rows[pr] = [c * inv for c in rows[pr]]
        for i in range(nr):
            if i != pr and rows[i][pc] != 0:
                f = rows[i][pc]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[pr])]
        pivots.append(pc)
        pr += 1
        if pr == nr:
            break
    return mat(rows), tuple(pivots), len(pivots)


def rank(m) -> int:
    return row_reduce(m)[2]


def nullspace(m) -> list[tuple[Fraction, ...]]:
    """Canonical basis of {x : m x = 0}, one vector per free column."""
    rref, pivots, _ = row_reduce(m)
    nc = shape(rref)[1]
    pivot_set = set(pivots)
    basis = []
    for free in range(nc):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * nc
        vec[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][free]
        basis.append(tuple(vec))
    return basis


def solve_right_inverse(m) -> Mat:
    """Inverse of a square rational matrix via Gauss--Jordan."""
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(1 if i == j else 0)
                                       for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [c * inv for c in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return mat(row[n:] for row in aug)


def char_poly(m) -> list[Fraction]:
    """Characteristic polynomial det(xI - m), low degree first, monic.

    Faddeev--LeVerrier recursion; exact over Q.
    """
    n = len(m)
    a = mat(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = identity(n)
    for k in range(1, n + 1):
        mk = mat_mul(a, mk)
        ck = -Fraction(sum(mk[i][i] for i in range(n)), k)
        coeffs[n - k] = ck
        if k < n:
            mk = mat_add(mk, mat_scale(identity(n), ck))
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(coeffs: Sequence[Fraction]) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicities, plus nothing else.

    Returns roots sorted increasingly; the caller can infer the residual
    non-rational factor degree from the multiplicity total.
    """
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("zero polynomial")
    # strip x^k factor: root 0 with that multiplicity
    val = 0
    while cs[val] == 0:
        val += 1
    cs = cs[val:]
    roots: dict[Fraction, int] = {}
    if val:
        roots[Fraction(0)] = val
    den_lcm = 1
    for c in cs:
        den_lcm = den_lcm * c.denominator // _gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in cs]
    candidates: list[Fraction] = []
    if len(ints) > 1:
        a0, an = ints[0], ints[-1]
        for p in _divisors(a0):
            for q in _divisors(an):
                if _gcd(p, q) == 1:
                    candidates.extend((Fraction(p, q), Fraction(-p, q)))
    poly = list(cs)
    for cand in sorted(set(candidates)):
        while len(poly) > 1 and _poly_eval(poly, cand) == 0:
            poly = _deflate(poly, cand)
            roots[cand] = roots.get(cand, 0) + 1
    return sorted(roots.items())


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _poly_eval(cs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _deflate(cs: Sequence[Fraction], root: Fraction) -> list[Fraction]:
    # synthetic division by (x - root); remainder known to vanish
    n = len(cs) - 1
    out = [Fraction(0)] * n
    b = cs[n]
    out[n - 1] = b
    for k in range(n - 1, 0, -1):
        b = cs[k] + root * b
        out[k - 1] = b
    return out


def rational_eigenvalues(m) -> tuple[list[tuple[Fraction, int]], int]:
    """Rational eigenvalues with algebraic multiplicities.

    Returns (sorted eigenvalue list, residual degree of the non-rational
    factor of the characteristic polynomial).
    """
    n = len(m)
    if n == 0:
        return [], 0
    for row in m:
        assert len(row) == n, "matrix must be square"
    eigs = rational_roots(char_poly(m))
    found = sum(mult for _, mult in eigs)
    return eigs, n - found


def generalized_eigenspace(m, lam) -> list[tuple[Fraction, ...]]:
    """Basis of ker((m - lam I)^n) for square m."""
    n = len(m)
    lam = Fraction(lam)
    shifted = mat_sub(mat(m), mat_scale(identity(n), lam))
    power = identity(n)
    for _ in range(n):
        power = mat_mul(shifted, power)
    return nullspace(power)


def column_span_rref(vectors: Sequence[Sequence[Fraction]]) -> Mat:
    """Canonical form of the span of the given vectors: RREF of the stack.

    Two spans are equal iff their canonical forms are equal.
    """
    if not vectors:
        return ()
    rref, _, r = row_reduce(vectors)
    return rref[:r]


def in_span(vectors: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    if not vectors:
        return all(c == 0 for c in v)
    base = rank(vectors)
    return rank(list(vectors) + [list(v)]) == base
