"""Shared test oracles.

``hn_graded_dim`` computes the dimension of the image of
F^HN_beta(M[1/h]) cap V_gamma in gr_gamma^V by a windowed membership solve
over Laurent combinations of section generators, an implementation of the
graded comparison that is independent of the splitting bookkeeping used by
the library itself.
"""

from fractions import Fraction

from irrhodge import linalg
from irrhodge.vfiltration import _apply_to_poly_vector


def hn_graded_dim(ana, gamma, beta, window=6):
    gamma, beta = Fraction(gamma), Fraction(beta)
    sec = ana.sections(beta)
    if not sec.basis:
        return 0
    vf = ana.vf
    vectors = [(j, vec) for vec in sec.basis
               for j in range(-window, window + 1)]
    pinv_g = vf.basis_inverse(gamma)
    alpha, k = vf.lattice_point(gamma)
    pred_alpha, shift = vf.predecessor(alpha)
    pinv_lt = vf.lattices[pred_alpha].base_change_inv.shift(k - shift)

    def kernel_dim(pinv):
        low = 0
        images = []
        for j, vec in vectors:
            coords = [c.shift(-j) for c in
                      _apply_to_poly_vector(pinv, list(vec))]
            images.append(coords)
            for c in coords:
                if not c.is_zero():
                    low = min(low, c.valuation())
        if low == 0:
            return len(vectors)
        cols = []
        for coords in images:
            col = []
            for comp in coords:
                col.extend(comp.coeff(t) for t in range(low, 0))
            cols.append(col)
        return len(linalg.nullspace(linalg.transpose(linalg.mat(cols))))

    return kernel_dim(pinv_g) - kernel_dim(pinv_lt)
