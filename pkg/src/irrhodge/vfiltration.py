"""Deligne lattice family at v = 0 (the point h = infinity).

The chart change is v = 1/h, under which h^2 d/dh = -d/dv and
v d/dv = -h d/dh.  Starting from the e-basis lattice we saturate until the
v d/dv action is logarithmic (Fuchs criterion; failure to stabilize within
the cap reports an irregular singularity), then shear residue eigenvalues
into the half-open window [-beta, -beta+1) to reach the Deligne lattice
V_beta.

Orientation convention used everywhere downstream: a section on which
v d/dv acts with eigenvalue lambda sits at jump beta = -lambda, so that
(v d/dv + beta) is nilpotent on gr_beta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .connection import Connection
from .errors import (IrrationalExponentError, IrregularSingularityError,
                     NotLogarithmicError)
from .matrices import LaurentMatrix, column_hermite
from .poly import LaurentPoly, Poly


@dataclass(frozen=True)
class VChartSystem:
    rank: int
    v_action: LaurentMatrix     # B(v): v d/dv f_j = sum_i B[i][j] f_i
    base_change: LaurentMatrix  # current basis expressed in the e-basis
    base_change_inv: LaurentMatrix

    def gauge(self, g: LaurentMatrix, g_inv: LaurentMatrix) -> "VChartSystem":
        new_action = g_inv * (g.theta() + self.v_action * g)
        return VChartSystem(self.rank, new_action,
                            self.base_change * g,
                            g_inv * self.base_change_inv)


def to_v_chart(m: Connection) -> VChartSystem:
    """B(v) = -v * A(1/v) on the e-basis lattice."""
    v = LaurentPoly.monomial(1, 1)
    action = LaurentMatrix(
        [[-(v * e.to_laurent().substitute_inverse()) for e in row]
         for row in m.action.entries])
    ident = LaurentMatrix.identity(m.rank)
    return VChartSystem(m.rank, action, ident, ident)


def _triangular_laurent_inverse(t: LaurentMatrix) -> LaurentMatrix:
    """Inverse of a lower-triangular Laurent matrix with monomial diagonal."""
    n = t.rows
    zero, one = LaurentMatrix._zero, LaurentMatrix._one
    out = [[zero] * n for _ in range(n)]
    for j in range(n):
        out[j][j] = one.exact_div(t.entries[j][j])
        for i in range(j + 1, n):
            acc = zero
            for s in range(j, i):
                acc = acc + t.entries[i][s] * out[s][j]
            if not acc.is_zero():
                out[i][j] = (-acc).exact_div(t.entries[i][i])
    return LaurentMatrix(out)


def saturate(sys: VChartSystem, max_iter: int) -> VChartSystem:
    """Iterate L <- L + (v d/dv)L until the action has no pole at v = 0.

    Raises IrregularSingularityError when the lattice keeps growing past
    ``max_iter`` steps: either the singularity is genuinely irregular or the
    (configurable) cap is too low for a pathological regular input.
    """
    return _saturate_counted(sys, max_iter)[0]


def _saturate_counted(sys: VChartSystem, max_iter: int
                      ) -> tuple[VChartSystem, int]:
    assert max_iter >= 1
    current = sys
    for step in range(max_iter):
        if current.v_action.is_polynomial():
            return current, step
        n_pole = -current.v_action.min_valuation()
        vn = LaurentPoly.monomial(1, n_pole)
        gen_cols = []
        for j in range(current.rank):
            col = [vn if i == j else LaurentPoly() for i in range(current.rank)]
            gen_cols.append([e.to_poly() for e in col])
        for j in range(current.rank):
            col = [(vn * current.v_action.entries[i][j]).to_poly()
                   for i in range(current.rank)]
            gen_cols.append(col)
        basis = column_hermite(gen_cols)
        t = LaurentMatrix(list(zip(*basis)))  # columns -> matrix
        for j in range(t.rows):
            if not t.entries[j][j].is_monomial():
                raise IrregularSingularityError(
                    "saturation produced a non-unit basis change")
        g = t.shift(-n_pole)
        g_inv = _triangular_laurent_inverse(t).shift(n_pole)
        current = current.gauge(g, g_inv)
    if current.v_action.is_polynomial():
        return current, max_iter
    raise IrregularSingularityError(
        f"lattice saturation did not stabilize within {max_iter} steps; "
        f"the connection has an irregular singularity at infinity, or raise "
        f"the cap (IRRHODGE_MAX_SAT / --max-sat)")


def residue(sys: VChartSystem) -> linalg.Mat:
    if not sys.v_action.is_polynomial():
        raise NotLogarithmicError("action matrix has a pole at v = 0")
    return sys.v_action.coefficient_matrix(0)


def _residue_eigenvalues(res: linalg.Mat) -> list[tuple[Fraction, int]]:
    eigs, residual = linalg.rational_eigenvalues(res)
    if residual:
        raise IrrationalExponentError(
            f"residue has a non-rational characteristic factor of degree "
            f"{residual}; exponents must be rational")
    return eigs


def shear_to_window(sys: VChartSystem, beta: Fraction) -> VChartSystem:
    """Normalize residue eigenvalues into [-beta, -beta+1)."""
    beta = Fraction(beta)
    w = -beta
    current = sys
    eigs = _residue_eigenvalues(residue(current))
    budget = sum(abs(_window_offset(lam, w)) * mult for lam, mult in eigs) + 1
    for _ in range(budget):
        res = residue(current)
        eigs = _residue_eigenvalues(res)
        offenders = [(lam, mult) for lam, mult in eigs
                     if _window_offset(lam, w) != 0]
        if not offenders:
            return current
        # deterministic choice: smallest fractional class first, then the
        # extremal eigenvalue of that class
        frac_class = min((lam - w) % 1 for lam, _ in offenders)
        in_class = [lam for lam, _ in eigs if (lam - w) % 1 == frac_class]
        target = w + frac_class
        top, bottom = max(in_class), min(in_class)
        if top > target:
            lam_star, power = top, -1
        else:
            lam_star, power = bottom, +1
        block = linalg.generalized_eigenspace(res, lam_star)
        rest: list = []
        for lam, _ in eigs:
            if lam != lam_star:
                rest.extend(linalg.generalized_eigenspace(res, lam))
        cols = [list(vec) for vec in block] + [list(vec) for vec in rest]
        assert len(cols) == current.rank, "eigenspaces do not span"
        c_mat = linalg.transpose(linalg.mat(cols))
        c_inv = linalg.solve_right_inverse(c_mat)
        g = LaurentMatrix(c_mat)
        g_inv = LaurentMatrix(c_inv)
        current = current.gauge(g, g_inv)
        powers = [power] * len(block) + [0] * len(rest)
        d = LaurentMatrix.identity(current.rank).scale_columns(powers)
        d_inv = LaurentMatrix.identity(current.rank).scale_columns(
            [-p for p in powers])
        current = current.gauge(d, d_inv)
        if not current.v_action.is_polynomial():
            raise AssertionError("shearing broke the logarithmic property")
    raise AssertionError("shearing failed to terminate")


def _window_offset(lam: Fraction, w: Fraction) -> int:
    """Integer k such that lam - k lies in [w, w+1)."""
    from math import floor
    return floor(lam - w)


@dataclass(frozen=True)
class VFiltration:
    """The periodic Deligne lattice family, one lattice per jump class.

    ``lattices[alpha]`` is the chart system of V_alpha for alpha in [0,1);
    V_(alpha+k) is represented by v^(-k) times that basis.
    """
    jumps01: tuple[Fraction, ...]
    lattices: dict
    nilpotency_bound: int
    saturation_steps: int = 0

    def lattice_point(self, beta: Fraction) -> tuple[Fraction, int]:
        """Largest jump gamma = alpha + k <= beta; returns (alpha, k)."""
        beta = Fraction(beta)
        frac_part = beta % 1
        alpha = max(a for a in self.jumps01 if a <= frac_part)
        k = int(beta - frac_part)
        return alpha, k

    def basis_matrix(self, beta: Fraction) -> LaurentMatrix:
        alpha, k = self.lattice_point(beta)
        return self.lattices[alpha].base_change.shift(-k)

    def basis_inverse(self, beta: Fraction) -> LaurentMatrix:
        alpha, k = self.lattice_point(beta)
        return self.lattices[alpha].base_change_inv.shift(k)

    def predecessor(self, alpha: Fraction) -> tuple[Fraction, int]:
        """Jump class directly below alpha: (alpha', shift) with the
        predecessor lattice equal to v^shift * V_alpha'."""
        idx = self.jumps01.index(alpha)
        if idx > 0:
            return self.jumps01[idx - 1], 0
        return self.jumps01[-1], 1

    def membership(self, beta: Fraction, vector) -> bool:
        """Is the h-polynomial coordinate vector inside V_beta?"""
        pinv = self.basis_inverse(beta)
        coords = _apply_to_poly_vector(pinv, vector)
        return all(c.polynomial_part_ok() for c in coords)


def _apply_to_poly_vector(m: LaurentMatrix, vector) -> list[LaurentPoly]:
    """m times a vector of Q[h] entries, rewritten in the v variable."""
    lau = [p.to_laurent().substitute_inverse() if isinstance(p, Poly)
           else p for p in vector]
    out = []
    for i in range(m.rows):
        acc = LaurentPoly()
        for j, x in enumerate(lau):
            acc = acc + m.entries[i][j] * x
        out.append(acc)
    return out


def default_saturation_cap(m: Connection) -> int:
    """rank x (1 + pole order) x 4, overridable via IRRHODGE_MAX_SAT."""
    import os
    override = os.environ.get("IRRHODGE_MAX_SAT")
    if override:
        return int(override)
    sys = to_v_chart(m)
    pole = max(0, -sys.v_action.min_valuation())
    return m.rank * (1 + pole) * 4


def v_filtration_family(m: Connection, max_iter: int | None = None
                        ) -> VFiltration:
    """Full pipeline: chart change, saturation, one shear per jump class.

    Verifies the defining invariants (lattice inclusions, logarithmic
    property with in-window residues, graded nilpotency) before returning.
    """
    cap = max_iter if max_iter is not None else default_saturation_cap(m)
    log_sys, steps = _saturate_counted(to_v_chart(m), cap)
    eigs = _residue_eigenvalues(residue(log_sys))
    classes = sorted({(-lam) % 1 for lam, _ in eigs} | {Fraction(0)})
    lattices = {alpha: shear_to_window(log_sys, alpha) for alpha in classes}
    vf = VFiltration(tuple(classes), lattices, 0, steps)
    nu = _verify_family(m, vf)
    return VFiltration(tuple(classes), lattices, nu, steps)


def _verify_family(m: Connection, vf: VFiltration) -> int:
    """Check inclusions, windows and graded nilpotency; return the bound."""
    classes = vf.jumps01
    for alpha in classes:
        sys = vf.lattices[alpha]
        res = residue(sys)
        for lam, _ in _residue_eigenvalues(res):
            if not (-alpha <= lam < -alpha + 1):
                raise AssertionError(
                    f"residue eigenvalue {lam} outside window for {alpha}")
        pred_alpha, shift = vf.predecessor(alpha)
        incl = sys.base_change_inv * \
            vf.lattices[pred_alpha].base_change.shift(shift)
        if not incl.is_polynomial():
            raise AssertionError(f"lattice inclusion fails below {alpha}")
    nu_max = 0
    for alpha in classes:
        sys = vf.lattices[alpha]
        pred_alpha, shift = vf.predecessor(alpha)
        pred_inv = vf.lattices[pred_alpha].base_change_inv.shift(-shift)
        alpha_const = LaurentPoly.const(alpha)
        op = LaurentMatrix(
            [[sys.v_action.entries[i][j] + (alpha_const if i == j else
                                            LaurentPoly())
              for j in range(sys.rank)] for i in range(sys.rank)])
        cols = LaurentMatrix.identity(sys.rank)
        nu = None
        for step in range(1, sys.rank + 2):
            cols = op * cols + cols.theta()
            rel = pred_inv * (sys.base_change * cols)
            if rel.is_polynomial():
                nu = step
                break
        if nu is None:
            raise AssertionError(f"graded nilpotency fails at class {alpha}")
        nu_max = max(nu_max, nu)
    return nu_max
