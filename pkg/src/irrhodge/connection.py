"""Free modules over Q[h] with an action of h^2 d/dh.

A ``Connection`` stores the action matrix A(h) in a distinguished basis,
column convention: h^2 d/dh e_j = sum_i A[i][j] e_i.  Polynomial entries
encode a pole of order at most two at h = 0 and no pole elsewhere; regularity
at infinity is not an invariant here and is checked by the v-filtration
machinery downstream.

All functors fix explicit basis orderings (i-major for tensor products,
lexicographic increasing tuples for wedge powers) so results are reproducible
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from . import linalg
from .errors import BadAlphaError, BadFiltrationError, ShapeError
from .matrices import PolyMatrix, kronecker
from .poly import Poly


@dataclass(frozen=True)
class Connection:
    rank: int
    action: PolyMatrix
    label: Optional[str] = None

    def __post_init__(self):
        if self.action.rows != self.rank or self.action.cols != self.rank:
            raise ShapeError(
                f"action matrix is {self.action.rows}x{self.action.cols}, "
                f"expected {self.rank}x{self.rank}")

    def relabel(self, label: str) -> "Connection":
        return Connection(self.rank, self.action, label)


@dataclass(frozen=True)
class Fiber:
    """H = M/(h-1)M, with evaluation at h = 1 as the quotient map."""
    dimension: int

    def evaluate(self, vector: Sequence[Poly]) -> tuple[Fraction, ...]:
        return tuple(p(1) for p in vector)


@dataclass(frozen=True)
class FilteredSpace:
    """Increasing exhaustive filtration of Q^n by subspaces.

    ``levels`` maps a rational index to a tuple of basis vectors of the
    subspace at that index.  Monotonicity and exhaustion are validated.
    """
    dimension: int
    levels: tuple[tuple[Fraction, tuple[tuple[Fraction, ...], ...]], ...]

    @staticmethod
    def from_jumps(levels: dict) -> "FilteredSpace":
        items = sorted((Fraction(k), tuple(tuple(Fraction(c) for c in vec)
                                           for vec in vs))
                       for k, vs in levels.items())
        if not items:
            raise BadFiltrationError("empty filtration")
        dim = len(items[0][1][0]) if items[0][1] else len(items[-1][1][0])
        fs = FilteredSpace(dim, tuple(items))
        fs.validate()
        return fs

    def validate(self):
        """Each level lists a basis of the full subspace at that index."""
        prev: list = []
        prev_rank = 0
        for _, vecs in self.levels:
            cur = [list(v) for v in vecs]
            for vec in cur:
                if len(vec) != self.dimension:
                    raise BadFiltrationError("vector length mismatch")
            cur_rank = linalg.rank(cur) if cur else 0
            if cur_rank != len(cur):
                raise BadFiltrationError("level basis is not independent")
            if prev and linalg.rank(prev + cur) != cur_rank:
                raise BadFiltrationError("filtration not increasing")
            if cur_rank <= prev_rank:
                raise BadFiltrationError("levels must jump strictly")
            prev, prev_rank = cur, cur_rank
        if prev_rank != self.dimension:
            raise BadFiltrationError("filtration is not exhaustive")


def make_connection(rank: int, action_rows, label: Optional[str] = None
                    ) -> Connection:
    matrix = action_rows if isinstance(action_rows, PolyMatrix) \
        else PolyMatrix(action_rows)
    return Connection(rank, matrix, label)


def trivial(rank: int = 1) -> Connection:
    """(Q[h]^rank, d): the unit object."""
    return make_connection(rank, PolyMatrix.zeros(rank, rank), "trivial")


def tensor(m1: Connection, m2: Connection) -> Connection:
    """Tensor product, basis e_i (x) f_j ordered i-major."""
    return Connection(m1.rank * m2.rank, kronecker(m1.action, m2.action))


def dual(m: Connection) -> Connection:
    """Dual module with the dual action -A(h)^T in the dual basis."""
    return Connection(m.rank, -m.action.transpose())


def direct_sum(m1: Connection, m2: Connection) -> Connection:
    r1, r2 = m1.rank, m2.rank
    zero = Poly()
    rows = []
    for i in range(r1):
        rows.append(list(m1.action.entries[i]) + [zero] * r2)
    for i in range(r2):
        rows.append([zero] * r1 + list(m2.action.entries[i]))
    return Connection(r1 + r2, PolyMatrix(rows))


def tate_twist(m: Connection, ell: int) -> Connection:
    """Action on h^ell M in the basis h^ell e_j: adds ell*h on the diagonal."""
    shift = Poly([0, ell])
    rows = [[m.action.entries[i][j] + (shift if i == j else Poly())
             for j in range(m.rank)] for i in range(m.rank)]
    return Connection(m.rank, PolyMatrix(rows))


def exponential_twist(m: Connection, c) -> Connection:
    """Twist by e^(-c/h): the h^2 d/dh action picks up -c on the diagonal."""
    c = Fraction(c)
    rows = [[m.action.entries[i][j] - (Poly([c]) if i == j else Poly())
             for j in range(m.rank)] for i in range(m.rank)]
    return Connection(m.rank, PolyMatrix(rows))


def wedge(m: Connection, r: int) -> Connection:
    """r-th wedge power; basis = increasing index tuples in lex order."""
    if not 1 <= r <= m.rank:
        raise ShapeError(f"wedge degree {r} out of range 1..{m.rank}")
    tuples = list(combinations(range(m.rank), r))
    index = {t: k for k, t in enumerate(tuples)}
    n = len(tuples)
    out = [[Poly() for _ in range(n)] for _ in range(n)]
    for col, t in enumerate(tuples):
        for pos in range(r):
            i_old = t[pos]
            for i_new in range(m.rank):
                coeff = m.action.entries[i_new][i_old]
                if coeff.is_zero():
                    continue
                replaced = list(t)
                replaced[pos] = i_new
                if len(set(replaced)) < r:
                    continue
                order = sorted(range(r), key=lambda s: replaced[s])
                sign = _perm_sign(order)
                target = tuple(sorted(replaced))
                signed = coeff if sign == 1 else -coeff
                out[index[target]][col] = out[index[target]][col] + signed
    return Connection(n, PolyMatrix(out))


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def hypergeometric(alpha: Sequence) -> Connection:
    """Confluent hypergeometric model of rank mu = len(alpha).

    Requires 0 <= alpha_0 <= ... <= alpha_(mu-1) < 1.  In the distinguished
    basis the action matrix is -A0 + h*Ainf with Ainf = diag(sigma_k),
    sigma_k = k + mu*alpha_k, and A0 = mu times the cyclic matrix with ones
    in position (k+1 mod mu, k).
    """
    alphas = [Fraction(a) for a in alpha]
    mu = len(alphas)
    if mu == 0:
        raise BadAlphaError("alpha must be nonempty")
    if any(a < 0 or a >= 1 for a in alphas):
        raise BadAlphaError(f"alpha entries must lie in [0,1): {alphas}")
    if any(alphas[i] > alphas[i + 1] for i in range(mu - 1)):
        raise BadAlphaError(f"alpha must be nondecreasing: {alphas}")
    sigma = [k + mu * alphas[k] for k in range(mu)]
    rows = [[Poly() for _ in range(mu)] for _ in range(mu)]
    for k in range(mu):
        rows[(k + 1) % mu][k] = Poly([-mu])
        rows[k][k] = rows[k][k] + Poly([0, sigma[k]])
    label = "hypergeometric(" + ",".join(str(a) for a in alphas) + ")"
    return Connection(mu, PolyMatrix(rows), label)


def from_filtered_space(f: FilteredSpace) -> Connection:
    """Rees module of a filtered vector space with integer jumps.

    In a basis adapted to the filtration the action is h*diag(p_i) with p_i
    the level at which the i-th adapted vector enters.
    """
    levels = []
    chosen: list[list[Fraction]] = []
    for idx, vecs in f.levels:
        if idx.denominator != 1:
            raise BadFiltrationError(f"non-integer jump level {idx}")
        for vec in vecs:
            if not linalg.in_span(chosen, vec):
                chosen.append(list(vec))
                levels.append(int(idx))
    if len(chosen) != f.dimension:
        raise BadFiltrationError("could not extract an adapted basis")
    rows = [[Poly([0, levels[i]]) if i == j else Poly()
             for j in range(f.dimension)] for i in range(f.dimension)]
    return Connection(f.dimension, PolyMatrix(rows))


def fiber(m: Connection) -> Fiber:
    return Fiber(m.rank)


def gauge_transform(m: Connection, g: PolyMatrix, g_inv: PolyMatrix
                    ) -> Connection:
    """Action in the new basis defined by the columns of g.

    g must be unimodular over Q[h] with inverse g_inv; the new action is
    g_inv (h^2 g' + A g).
    """
    hbar_sq = Poly([0, 0, 1])
    new_action = g_inv * (g.derivative() * hbar_sq + m.action * g)
    return Connection(m.rank, new_action)
