"""Closed-form counterparts used as the second side of verification.

The hypergeometric rank count, spectrum convolution (Thom-Sebastiani at a
point), wedge combinatorics over an adapted basis, and the Grassmannian
Hodge-number pattern.  All are straight enumerations over exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .connection import hypergeometric
from .errors import BadAlphaError, ShapeError
from .hodge import Spectrum, spectrum


@dataclass(frozen=True)
class HypergeomParams:
    mu: int
    alpha: tuple[Fraction, ...]
    sigma: tuple[Fraction, ...]

    @staticmethod
    def from_alpha(alpha: Sequence) -> "HypergeomParams":
        alphas = tuple(Fraction(a) for a in alpha)
        mu = len(alphas)
        if mu == 0:
            raise BadAlphaError("alpha must be nonempty")
        if any(a < 0 or a >= 1 for a in alphas):
            raise BadAlphaError(f"alpha entries must lie in [0,1): {alphas}")
        if any(alphas[i] > alphas[i + 1] for i in range(mu - 1)):
            raise BadAlphaError(f"alpha must be nondecreasing: {alphas}")
        sigma = tuple(k + mu * alphas[k] for k in range(mu))
        return HypergeomParams(mu, alphas, sigma)


def hypergeom_rank(params: HypergeomParams, beta) -> int:
    """#{k : alpha_k <= (beta - k)/mu}, i.e. #{k : sigma_k <= beta}."""
    beta = Fraction(beta)
    return sum(1 for s in params.sigma if s <= beta)


def hypergeom_spectrum(params: HypergeomParams) -> Spectrum:
    return Spectrum.from_jumps(params.sigma)


def convolve_spectra(s1: Spectrum, s2: Spectrum) -> Spectrum:
    """Multiset Minkowski sum; mass multiplies."""
    acc: dict[Fraction, int] = {}
    for j1, m1 in s1.entries:
        for j2, m2 in s2.entries:
            acc[j1 + j2] = acc.get(j1 + j2, 0) + m1 * m2
    return Spectrum(tuple(sorted(acc.items())))


def wedge_spectrum(s: Spectrum, r: int) -> Spectrum:
    """Antisymmetric combination over an adapted basis.

    Enumerates size-r subsets of positions in the expanded jump list; the
    wedge jump is the sum of the chosen jumps.
    """
    expanded = s.jumps_expanded()
    if not 1 <= r <= len(expanded):
        raise ShapeError(f"wedge degree {r} out of range 1..{len(expanded)}")
    acc: dict[Fraction, int] = {}
    for positions in combinations(range(len(expanded)), r):
        total = sum(expanded[p] for p in positions)
        acc[total] = acc.get(total, 0) + 1
    return Spectrum(tuple(sorted(acc.items())))


def grassmannian_d(r: int, n: int) -> list[tuple[int, int]]:
    """d_p = #{n >= i_1 > ... > i_r >= 0 with sum i = p}, all p."""
    if not 1 <= r <= n + 1:
        raise ShapeError(f"need 1 <= r <= n+1, got r={r}, n={n}")
    acc: dict[int, int] = {}
    for tup in combinations(range(n + 1), r):
        p = sum(tup)
        acc[p] = acc.get(p, 0) + 1
    return sorted(acc.items())


@dataclass(frozen=True)
class HypergeomReport:
    alpha: tuple[Fraction, ...]
    computed: Spectrum
    formula: Spectrum
    matches: bool
    sign: int | None
    shift: Fraction | None

    def summary(self) -> str:
        if self.matches:
            return (f"match (sign {self.sign:+d}, shift {self.shift}) for "
                    f"alpha = {tuple(str(a) for a in self.alpha)}")
        return (f"MISMATCH for alpha = {tuple(str(a) for a in self.alpha)}: "
                f"computed {self.computed.entries} vs formula "
                f"{self.formula.entries}")


def verify_hypergeom(alpha: Sequence) -> HypergeomReport:
    """Direct pipeline spectrum against {k + mu alpha_k}, up to sign and
    shift; reports the (sign, shift) found or the exact mismatch."""
    params = HypergeomParams.from_alpha(alpha)
    computed = spectrum(hypergeometric(alpha))
    formula = hypergeom_spectrum(params)
    for sign in (+1, -1):
        oriented = computed if sign == 1 else computed.negated()
        if oriented.normalized_min0().entries == \
                formula.normalized_min0().entries:
            shift = formula.entries[0][0] - oriented.entries[0][0]
            return HypergeomReport(params.alpha, computed, formula, True,
                                   sign, shift)
    return HypergeomReport(params.alpha, computed, formula, False, None, None)
