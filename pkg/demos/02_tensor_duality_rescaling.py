"""Thom-Sebastiani at a point, duality of exponents, and the rescaling
oracle.

Three theorems, each checked here by computing both sides independently:

  * tensor product    -- the spectrum of M1 (x) M2 is the additive
                         convolution of the spectra (checked at the level of
                         subspaces of H, not just dimensions);
  * duality           -- F^irr of the dual is the annihilator of F^irr_<(-beta),
                         so the spectrum is negated;
  * rescaling         -- adjoining the unit tau and re-deriving the
                         filtration from the tau-V-filtration gives the same
                         answer through entirely different arithmetic.

Run:  python demos/02_tensor_duality_rescaling.py
"""

from fractions import Fraction

from irrhodge import (check_duality_formula, check_tensor_formula,
                      convolve_spectra, dual, grading_oracle_full,
                      hypergeometric, make_connection, spectrum, tensor)

kl2 = hypergeometric((0, 0))          # the mu = 2, alpha = (0,0) model
third = make_connection(1, [[[0, Fraction(1, 3)]]])


def pretty(spec):
    return "{" + ", ".join(f"{j} x{m}" for j, m in spec.entries) + "}"


print("spectrum of K:", pretty(spectrum(kl2)))
print("spectrum of L:", pretty(spectrum(third)))

print("\n== tensor product ==")
prod = tensor(kl2, third)
direct = spectrum(prod)
conv = convolve_spectra(spectrum(kl2), spectrum(third))
print("direct pipeline on K (x) L:", pretty(direct))
print("convolution of factors:    ", pretty(conv))
assert direct.entries == conv.entries

report = check_tensor_formula(kl2, third)
print("subspace-level identity:", "exact" if report.passed else "BROKEN")
for line in report.details:
    print("   ", line)

print("\n== duality ==")
print("spectrum of K:     ", pretty(spectrum(kl2)))
print("spectrum of K-dual:", pretty(spectrum(dual(kl2))))
rep = check_duality_formula(kl2)
print("perp identity:", "exact" if rep.passed else "BROKEN")

print("\n== the rescaling oracle ==")
# Independent route: dimensions of section spaces V_(beta+k) cap M, solved
# by a degree-capped rational nullspace, re-derive the whole spectrum.
for conn, label in ((kl2, "K"), (tensor(kl2, third), "K (x) L")):
    oracle = grading_oracle_full(conn)
    pipeline = spectrum(conn)
    tag = "agree" if oracle.entries == pipeline.entries else "DISAGREE"
    print(f"{label}: oracle {pretty(oracle)} vs pipeline "
          f"{pretty(pipeline)} -> {tag}")
    assert oracle.entries == pipeline.entries
