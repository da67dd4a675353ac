"""A first tour: connections, lattices at infinity, and spectra.

The central object is a free module over Q[h] with an action of h^2 d/dh;
polynomial action matrices mean a pole of order at most two at h = 0.  The
spectrum at infinity is the jump multiset of the irregular Hodge filtration
on the fiber at h = 1.  Everything below is exact rational arithmetic.

Run:  python demos/01_spectra_basics.py
"""

from fractions import Fraction

from irrhodge import (analyze, irr_hodge_filtration, make_connection,
                      spectrum, tate_twist, trivial)


def show(label, conn):
    spec = spectrum(conn)
    pretty = ", ".join(f"{j} (x{m})" for j, m in spec.entries)
    print(f"{label:<28} rank {conn.rank}:  {pretty}")
    return spec


print("== rank-one building blocks ==\n")

# The trivial connection (Q[h], d): a single jump at 0.
show("trivial", trivial(1))

# Twisting by h^ell shifts every jump by ell (the Tate twist).
show("Tate twist by 2", tate_twist(trivial(1), 2))
show("Tate twist by -1", tate_twist(trivial(1), -1))

# A rank-one module with action  h^2 d/dh e = c h e  sits at jump c, and c
# may be any rational: fractional exponents are the V-filtration's jump
# classes in (0,1).
half = make_connection(1, [[[0, Fraction(1, 2)]]])
show("action c = 1/2", half)

print("\n== under the hood: the Deligne lattice family ==\n")

ana = analyze(half)
print("jump classes in [0,1):", [str(a) for a in ana.vf.jumps01])
print("saturation steps:", ana.vf.saturation_steps)
print("nilpotency bound nu:", ana.vf.nilpotency_bound)

print("\n== the full filtration table on the fiber H ==\n")

levels = make_connection(3, [[[0, 0], [0], [0]],
                             [[0], [0, 0], [0]],
                             [[0], [0], [0, 1]]])
table = irr_hodge_filtration(levels)
for jump, dim, basis in table.steps:
    rows = ["(" + ", ".join(str(c) for c in vec) + ")" for vec in basis]
    print(f"F_{jump}: dimension {dim}, basis {'; '.join(rows)}")
print("\nThe Rees module of a filtered vector space recovers exactly the")
print("filtration it was built from: levels (0,0,1) give jumps 0,0,1.")
