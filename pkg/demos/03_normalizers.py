"""Compare the closed-form normalizer with the measured return sums."""

from fractions import Fraction

from cutstack import F_set, a_hat, corr_sum, decompose, valpha_params

p = valpha_params(Fraction(1, 2), "n^2", n_max=5)
F = F_set(p, 0)

for t in (48, 100, 1000, 1920, 512880, 662880):
    d = decompose(p, t)
    line = f"t={t:7d} n={d.n} q={d.q} r={d.r} case={d.case} a_hat={a_hat(p, t)}"
    if t <= 1920:
        # short enough to measure directly
        line += f" ratio={float(corr_sum(F, F, t) / a_hat(p, t)):.4f}"
    print(line)
