"""Exact correlations and Birkhoff sums on level sets."""

from fractions import Fraction

from cutstack import F_set, birkhoff_hist, corr, corr_sum, subcolumn_set, valpha_params

p = valpha_params(Fraction(1, 2), "n^2", n_max=5)
F = F_set(p, 0)

for i in (0, 1, 8, 9, 24, 48):
    print(f"mu(F & T^-{i} F) = {corr(F, F, i)}")

A = F & subcolumn_set(p, 2, 0)
B = F & subcolumn_set(p, 2, 1)
print("mu(A), mu(B):", A.measure, B.measure)
print("sum over i < 1920 of mu(A & T^-i B) =", corr_sum(A, B, 1920))

# Distribution of the number of visits to F in 1920 steps, starting in F.
hist = birkhoff_hist(F, 1920)
for v, m in sorted(hist.entries.items()):
    print(f"  S = {v:4d} on measure {m}")
print("integral of S over F:", hist.integral(), "=", corr_sum(F, F, 1920))
