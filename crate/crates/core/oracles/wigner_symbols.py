"""Reference 3j/6j values from sympy's exact Racah evaluation."""
from sympy import Rational as R, N
from sympy.physics.wigner import wigner_3j, wigner_6j

h = R(1, 2)
cases_3j = [
    ((1, 2, 1, 0, 0, 0)),
    ((5, 2, 5, 5, 0, -5)),
    ((3 * h, 2, 5 * h, h, 1, -3 * h)),
    ((7 * h, 2, 7 * h, -5 * h, 1, 3 * h)),
]
cases_6j = [
    (3 * h, 1, 3 * h, 1, 3 * h, 2),
    (5, 2, 5, 3 * h, 7 * h, 3 * h),
    (4, 2, 5, 3 * h, 7 * h, 3 * h),
    (3 * h, 1, h, 1, 3 * h, 2),
]
for c in cases_3j:
    print("3j", c, N(wigner_3j(*c), 20))
for c in cases_6j:
    print("6j", c, N(wigner_6j(*c), 20))
