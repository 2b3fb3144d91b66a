"""Last subcolumns at different stages are independent inside C_1."""

from fractions import Fraction

from cutstack import independence_check, valpha_params

p = valpha_params(Fraction(1, 2), "n^2", n_max=5)

for n, n2 in ((2, 3), (2, 4), (3, 4), (3, 5)):
    r = independence_check(p, 1, n, n2)
    print(f"n={n} n'={n2}: {r.mu_En} * {r.mu_En2} = {r.product}, joint {r.mu_joint}")
