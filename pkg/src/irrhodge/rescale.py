"""Rescaled module: the verification oracle.

Adjoining the unit tau and substituting h -> h/tau turns M into
tM = (+)_k tau^k (x) M with three actions

    h       (tau^k (x) m) = tau^(k+1) (x) h m
    dbar_tau(tau^k (x) m) = tau^k (x) (k h m - h^2 d/dh m)
    h^2 d/dh(tau^k (x) m) = tau^(k+1) (x) h^2 d/dh m

(the k h m term is the Leibniz contribution of dbar_tau = h d/dtau acting on
tau^k).  The candidate V-filtration along tau = 0 of the truncated model is
assembled from the section spaces V_(beta+k) cap M, and the displayed grading
identity re-derives the spectrum of the connection by second differences of
section dimensions.  Section dimensions here are computed by a direct
degree-capped rational nullspace with a stabilization certificate, entirely
independent of the Birkhoff splitting used by the main pipeline, which is
what makes the agreement a genuine two-route check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .connection import Connection, dual, tensor
from .errors import NoStabilizeError, WindowError
from .hodge import Spectrum, analyze
from .matrices import LaurentMatrix
from .poly import Poly
from .vfiltration import VFiltration, _apply_to_poly_vector


@dataclass(frozen=True)
class RescaledModule:
    source: Connection
    window: int  # tau-degrees run over [-window, window]

    def in_window(self, k: int) -> bool:
        return -self.window <= k <= self.window

    def is_boundary(self, k: int) -> bool:
        return abs(k) == self.window

    def apply_hbar(self, k: int, x: Sequence[Poly]) -> tuple[int, tuple]:
        if not self.in_window(k + 1):
            raise WindowError(f"h-action leaves the window at degree {k}")
        h = Poly([0, 1])
        return k + 1, tuple(h * p for p in x)

    def apply_h2dh(self, k: int, x: Sequence[Poly]) -> tuple[int, tuple]:
        if not self.in_window(k + 1):
            raise WindowError(f"h^2 d/dh leaves the window at degree {k}")
        return k + 1, tuple(self._connection_action(x))

    def apply_dtau(self, k: int, x: Sequence[Poly]) -> tuple[int, tuple]:
        if not self.in_window(k):
            raise WindowError(f"degree {k} outside the window")
        kh = Poly([0, k])
        act = self._connection_action(x)
        return k, tuple(kh * p - a for p, a in zip(x, act))

    def _connection_action(self, x: Sequence[Poly]) -> list[Poly]:
        """h^2 d/dh on a coordinate vector: h^2 x' + A x."""
        a = self.source.action
        h2 = Poly([0, 0, 1])
        out = []
        for i in range(self.source.rank):
            acc = h2 * x[i].derivative()
            for j in range(self.source.rank):
                acc = acc + a.entries[i][j] * x[j]
            out.append(acc)
        return out


def rescale_module(m: Connection, window: int) -> RescaledModule:
    assert window >= 2, "window must be at least 2"
    return RescaledModule(m, window)


@dataclass(frozen=True)
class RescaledVPiece:
    beta: Fraction
    generators: tuple[tuple[int, tuple[tuple[Poly, ...], ...]], ...]

    def degree_dims(self) -> dict:
        return {k: len(basis) for k, basis in self.generators}


_SECTION_MEMO: dict = {}


def _vf_key(vf: VFiltration):
    return (vf.jumps01,
            tuple(vf.lattices[a].base_change for a in vf.jumps01))


def section_dims_direct(m: Connection, vf: VFiltration, beta,
                        degree_cap: int | None = None
                        ) -> tuple[int, list[tuple[Poly, ...]], int]:
    """dim and basis of V_beta cap M by degree-capped rational nullspace.

    Coefficient vectors of h-degree <= D are solved against the condition
    that the V-basis coordinates have no negative v-powers; D grows by the
    rank until two consecutive enlargements leave the dimension unchanged.
    Returns (dim, basis, certified D).
    """
    beta = Fraction(beta)
    memo_key = (_vf_key(vf), beta, degree_cap)
    if memo_key in _SECTION_MEMO:
        return _SECTION_MEMO[memo_key]
    if len(_SECTION_MEMO) > 4096:
        _SECTION_MEMO.clear()
    result = _section_dims_uncached(m, vf, beta, degree_cap)
    _SECTION_MEMO[memo_key] = result
    return result


def _section_dims_uncached(m: Connection, vf: VFiltration, beta: Fraction,
                           degree_cap: int | None
                           ) -> tuple[int, list[tuple[Poly, ...]], int]:
    r = m.rank
    pinv = vf.basis_inverse(beta)
    p = vf.basis_matrix(beta)
    base = max(0, -p.min_valuation()) + p.degree_span() + pinv.degree_span()
    cap = degree_cap if degree_cap is not None else base * max(r, 2) + 4 * r
    d = min(max(base, 2), cap)
    prev_dim = None
    stable = 0
    while True:
        basis = _solve_sections(pinv, r, d)
        if prev_dim is not None and len(basis) == prev_dim:
            stable += 1
            if stable >= 2:
                return len(basis), basis, d
        else:
            stable = 0
        prev_dim = len(basis)
        if d >= cap:
            if stable >= 1:
                return len(basis), basis, d
            raise NoStabilizeError(
                f"section dimension still growing at degree cap {cap}")
        d = min(d + r, cap)


def _solve_sections(pinv: LaurentMatrix, rank: int, degree: int
                    ) -> list[tuple[Poly, ...]]:
    """Nullspace of the negative-v-coefficient constraints."""
    n_unknowns = rank * (degree + 1)
    low = pinv.min_valuation() - degree
    if low >= 0:
        # every candidate already has polynomial v-coordinates
        kernel = [tuple(Fraction(1 if s == t else 0)
                        for t in range(n_unknowns))
                  for s in range(n_unknowns)]
    else:
        cols = []
        for i in range(rank):
            col = [pinv.entries[s][i] for s in range(rank)]
            for j in range(degree + 1):
                shifted = [e.shift(-j) for e in col]
                colvec = []
                for s in range(rank):
                    colvec.extend(shifted[s].coeff(t) for t in range(low, 0))
                cols.append(colvec)
        constraint = linalg.transpose(linalg.mat(cols))
        kernel = linalg.nullspace(constraint)
    basis = []
    for vec in kernel:
        comps = []
        for i in range(rank):
            coeffs = vec[i * (degree + 1):(i + 1) * (degree + 1)]
            comps.append(Poly(coeffs))
        basis.append(tuple(comps))
    return basis


def rescaled_v_piece(m: Connection, vf: VFiltration, beta,
                     window: int) -> RescaledVPiece:
    """Candidate V-filtration term: V_(beta+k) cap M placed in degree k."""
    beta = Fraction(beta)
    gens = []
    for k in range(-window, window + 1):
        _, basis, _ = section_dims_direct(m, vf, beta + k)
        gens.append((k, tuple(basis)))
    return RescaledVPiece(beta, tuple(gens))


def _tau_dtau_plus_beta_h(resc: RescaledModule, beta: Fraction, level: int,
                          x: Sequence[Poly]) -> tuple[int, tuple]:
    """(tau dbar_tau + beta h): tau^k (x) m -> tau^(k+1) (x)
    ((beta+k) h m - h^2 d/dh m)."""
    kh = Poly([0, beta + level])
    act = resc._connection_action(x)
    return level + 1, tuple(kh * p - a for p, a in zip(x, act))


def check_nilpotency(m: Connection, vf: VFiltration, piece: RescaledVPiece,
                     nu_max: int) -> bool:
    """(tau dbar_tau + beta h)^nu maps the candidate piece into U_<beta.

    Membership is tested on window-interior generators; raises WindowError
    when no generator admits nu_max applications inside the window.
    """
    resc = RescaledModule(m, max(2, max(k for k, _ in piece.generators)))
    beta = piece.beta
    checked = 0
    for k, basis in piece.generators:
        if k + nu_max > resc.window:
            continue  # boundary degrees are flagged partial
        for vec in basis:
            level, cur = k, vec
            ok = False
            for _ in range(nu_max):
                level, cur = _tau_dtau_plus_beta_h(resc, beta, level, cur)
                if _member_strict(vf, beta + level, cur):
                    ok = True
                    break
            checked += 1
            if not ok:
                return False
    if checked == 0 and any(basis for _, basis in piece.generators):
        raise WindowError(
            f"window too small to evaluate {nu_max} applications")
    return True


def _member_strict(vf: VFiltration, gamma: Fraction, vec) -> bool:
    """vec in V_<gamma cap M."""
    gamma = Fraction(gamma)
    alpha, k = vf.lattice_point(gamma)
    if alpha + k < gamma:
        return vf.membership(gamma, list(vec))
    pred_alpha, shift = vf.predecessor(alpha)
    pinv = vf.lattices[pred_alpha].base_change_inv.shift(k - shift)
    coords = _apply_to_poly_vector(pinv, list(vec))
    return all(c.polynomial_part_ok() for c in coords)


def check_strictness(m: Connection, vf: VFiltration,
                     beta_window: Sequence[Fraction] | None = None) -> bool:
    """Multiplication by h is injective on V-graded section quotients."""
    ana = analyze(m)
    lo, hi = ana.bounds()
    if beta_window is None:
        beta_window = []
        for alpha in vf.jumps01:
            k = int(lo) - 1
            while alpha + k <= hi + 1:
                beta_window.append(alpha + k)
                k += 1
    h = Poly([0, 1])
    for gamma in sorted(beta_window):
        _, basis, _ = section_dims_direct(m, vf, gamma - 1)
        if not basis:
            continue
        kernel_new = _membership_kernel(
            [[h * p for p in vec] for vec in basis], vf, gamma, strict=True)
        kernel_old = _membership_kernel(
            [list(vec) for vec in basis], vf, gamma - 1, strict=True)
        if linalg.column_span_rref(kernel_new) != \
                linalg.column_span_rref(kernel_old):
            return False
    return True


def _membership_kernel(vectors, vf: VFiltration, gamma, strict: bool
                       ) -> list[tuple[Fraction, ...]]:
    """Coefficient combos c with sum c_s vec_s inside V_gamma (or V_<gamma)."""
    gamma = Fraction(gamma)
    if strict:
        alpha, k = vf.lattice_point(gamma)
        if alpha + k == gamma:
            pred_alpha, shift = vf.predecessor(alpha)
            pinv = vf.lattices[pred_alpha].base_change_inv.shift(k - shift)
        else:
            pinv = vf.basis_inverse(gamma)
    else:
        pinv = vf.basis_inverse(gamma)
    rows_per_vec = []
    low = 0
    images = []
    for vec in vectors:
        coords = _apply_to_poly_vector(pinv, list(vec))
        images.append(coords)
        for c in coords:
            if not c.is_zero():
                low = min(low, c.valuation())
    if low == 0:
        return [tuple(Fraction(1 if i == j else 0) for j in range(len(vectors)))
                for i in range(len(vectors))]
    for coords in images:
        col = []
        for comp in coords:
            col.extend(comp.coeff(t) for t in range(low, 0))
        rows_per_vec.append(col)
    constraint = linalg.transpose(linalg.mat(rows_per_vec))
    return linalg.nullspace(constraint)


def grading_oracle(m: Connection, alpha, window: int | None = None
                   ) -> Spectrum:
    """Spectrum in the class of alpha by second differences of section dims.

    This is the rescaling route to the irregular Hodge numbers: the graded
    quotient at tau-degree k has dimension dim(V_(alpha+k) cap M) minus
    dim(V_(alpha+k-1) cap M), and the class spectrum is the increment of
    those quotients.  Raises WindowError when the window does not exhaust
    the class mass.
    """
    alpha = Fraction(alpha)
    assert 0 <= alpha < 1, "alpha must lie in [0,1)"
    ana = analyze(m)
    vf = ana.vf
    if alpha not in vf.jumps01:
        return Spectrum(())
    lo, hi = ana.bounds()
    if window is None:
        window = 2 + int(hi - lo) + 1
    k_lo = int(lo - (lo % 1)) - window
    k_hi = int(hi - (hi % 1)) + window
    pred_alpha, shift = vf.predecessor(alpha)

    def filtration_value(gamma: Fraction) -> int:
        """dim of (V_gamma cap M)/(1-h)(V_(gamma-1) cap M) = dim F^irr_gamma."""
        d_here, _, _ = section_dims_direct(m, vf, gamma)
        d_below, _, _ = section_dims_direct(m, vf, gamma - 1)
        return d_here - d_below

    # soundness of the quotient formula: (1-h)(V_(gamma-1) cap M) must land
    # inside V_gamma cap M; injectivity of (1-h) on M is automatic
    one_minus_h = Poly([1, -1])
    for k in range(k_lo, k_hi + 1):
        _, basis, _ = section_dims_direct(m, vf, alpha + k - 1)
        for vec in basis:
            shifted = [one_minus_h * p for p in vec]
            if not vf.membership(alpha + k, shifted):
                raise AssertionError("(1-h) image leaves the section space")
    d_bottom, _, _ = section_dims_direct(m, vf, alpha + k_lo)
    if d_bottom != 0:
        raise WindowError("window bottom does not reach the zero range")
    jumps = []
    for k in range(k_lo + 1, k_hi + 1):
        here = filtration_value(alpha + k)
        pred = filtration_value(pred_alpha + k - shift)
        inc = here - pred
        if inc < 0:
            raise AssertionError("filtration values decreased across classes")
        if inc > 0:
            jumps.append((alpha + k, inc))
    class_dim = _class_graded_dim(vf, alpha)
    if sum(mult for _, mult in jumps) != class_dim:
        raise WindowError(
            f"class mass not exhausted in the window: got "
            f"{sum(mu for _, mu in jumps)}, expected {class_dim}")
    return Spectrum(tuple(jumps))


def _class_graded_dim(vf: VFiltration, alpha: Fraction) -> int:
    """dim gr^V_alpha from the determinant of the relative basis change."""
    if alpha not in vf.jumps01:
        return 0
    pred_alpha, shift = vf.predecessor(alpha)
    rel = vf.lattices[alpha].base_change_inv * \
        vf.lattices[pred_alpha].base_change.shift(shift)
    det = rel.det()
    assert det.is_monomial(), "relative lattice determinant must be a monomial"
    return det.valuation()


def grading_oracle_full(m: Connection, window: int | None = None) -> Spectrum:
    """Union of the class oracles over all jump classes."""
    ana = analyze(m)
    jumps: list[tuple[Fraction, int]] = []
    for alpha in ana.vf.jumps01:
        jumps.extend(grading_oracle(m, alpha, window).entries)
    return Spectrum(tuple(sorted(jumps)))


def rescaled_dual_check(m: Connection, window: int = 3) -> bool:
    """Rescaling commutes with duality and tensor product on the window.

    Verifies the Leibniz compatibilities of the three actions against the
    canonical symbol pairing (dual case) and the symbol product map (tensor
    case, on m (x) m).
    """
    resc = rescale_module(m, window)
    resc_dual = rescale_module(dual(m), window)
    basis = [tuple(Poly([1]) if i == j else Poly() for j in range(m.rank))
             for i in range(m.rank)]
    for k in range(-window + 1, window - 1):
        for l in range(-window + 1, window - 1):
            for y in basis:
                for x in basis:
                    if not _dual_pairing_ok(resc, resc_dual, k, l, y, x):
                        return False
    prod = tensor(m, m)
    resc_prod = rescale_module(prod, 2 * window)
    for k in range(-window + 1, window - 1):
        for l in range(-window + 1, window - 1):
            for y in basis:
                for x in basis:
                    if not _tensor_symbol_ok(resc, resc_prod, k, l, y, x):
                        return False
    return True


def _pair(y: Sequence[Poly], x: Sequence[Poly]) -> Poly:
    acc = Poly()
    for a, b in zip(y, x):
        acc = acc + a * b
    return acc


def _dual_pairing_ok(resc, resc_dual, k, l, y, x) -> bool:
    """dbar_tau and h^2 d/dh Leibniz rules against <(k,y),(l,x)>."""
    h2 = Poly([0, 0, 1])
    val = _pair(y, x)
    # ring action of dbar_tau on a degree-(k+l) value c(h): (k+l) h c - h^2 c'
    lhs_tau = Poly([0, k + l]) * val - h2 * val.derivative()
    _, dy = resc_dual.apply_dtau(k, y)
    _, dx = resc.apply_dtau(l, x)
    rhs_tau = _pair(dy, x) + _pair(y, dx)
    if lhs_tau != rhs_tau:
        return False
    lhs_h = h2 * val.derivative()
    _, hy = resc_dual.apply_h2dh(k, y)
    _, hx = resc.apply_h2dh(l, x)
    rhs_h = _pair(hy, x) + _pair(y, hx)
    return lhs_h == rhs_h


def _tensor_symbol_ok(resc, resc_prod, k, l, y, x) -> bool:
    """(k,y) (x) (l,x) -> (k+l, y (x) x) intertwines the actions."""
    prod_vec = tuple(a * b for a in y for b in x)
    _, dy = resc.apply_dtau(k, y)
    _, dx = resc.apply_dtau(l, x)
    lhs = tuple(a * b for a in dy for b in x)
    lhs = tuple(p + q for p, q in
                zip(lhs, tuple(a * b for a in y for b in dx)))
    _, rhs = resc_prod.apply_dtau(k + l, prod_vec)
    if lhs != rhs:
        return False
    _, hy = resc.apply_h2dh(k, y)
    _, hx = resc.apply_h2dh(l, x)
    lhs_h = tuple(p + q for p, q in
                  zip(tuple(a * b for a in hy for b in x),
                      tuple(a * b for a in y for b in hx)))
    _, rhs_h = resc_prod.apply_h2dh(k + l, prod_vec)
    return lhs_h == rhs_h
