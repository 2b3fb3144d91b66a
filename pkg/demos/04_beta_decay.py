"""The beta-ratio along t = H_n for beta = 3.

Stage 5 needs the stage-6 refinement of F (about ten million runs), so the
last row takes a few seconds.
"""

from fractions import Fraction

from cutstack import beta_row, valpha_params

p = valpha_params(Fraction(1, 2), "n^2", n_max=5)

for n in range(2, 6):
    row = beta_row(p, n, 3)
    bound = "" if row.ratio_bound is None else f"  upper bound {row.ratio_bound:.2f}"
    print(f"n={n} t={row.t:10d} R={float(row.R_exact):.5f}{bound}")
