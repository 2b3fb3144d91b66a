"""Build a small rank-one tower and look at it level by level."""

from fractions import Fraction

from cutstack import build_explicit, embedding, geometry, valpha_params
from cutstack.oracle import dump_tower_csv

p = valpha_params(Fraction(1, 2), "n^2", n_max=5)

# Heights grow very fast; the non-spacer content grows much slower.
print(" n  k_n  m_n        h_n         H_n    h_hat_n")
for n in range(1, p.n_max + 1):
    g = geometry(p, n)
    print(f"{n:2d} {p.k[n]:4d} {p.m[n]:4d} {g.h:10d} {g.H:11d} {g.h_hat:10d}")

# Where the copies of C_1 sit inside C_2: two tall pieces at multiples of H_1.
print("copies of C_1 in C_2 start at", list(embedding(p, 1).offsets))

# The same column, cut and stacked by hand.  Provenance shows which piece
# each level came from.
print(dump_tower_csv(build_explicit(p, 2)))
