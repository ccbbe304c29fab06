"""Standalone static-limit sum over states read straight from cesium.dat."""
import math
import sys
from fractions import Fraction
from sympy.physics.wigner import wigner_6j
from sympy import Rational

path = sys.argv[1] if len(sys.argv) > 1 else "../data/cesium.dat"
HARTREE_CM = 219474.6313632
HARTREE_RAD_S = 4.134137333518e16

levels, trans = {}, []
for line in open(path):
    t = line.split("#")[0].split()
    if not t:
        continue
    if t[0] == "LEVEL":
        levels[t[1]] = (Fraction(int(t[4]), 2), float(t[5]), float(t[6]))
    elif t[0] == "TRANS":
        trans.append((t[1], t[2], float(t[3])))


def alpha(label, omega_au=0.0, damping=True):
    J, e, g = levels[label]
    a0 = a2 = 0.0
    for up, lo, d in trans:
        if label not in (up, lo):
            continue
        other = lo if up == label else up
        Jp, ep, gp = levels[other]
        w0 = (ep - e) / HARTREE_CM
        gam = (2 * math.pi * (g + gp) * 1e6 / HARTREE_RAD_S) if damping else 0.0
        x = w0 * w0 - omega_au**2 + gam * gam / 4
        f = w0 * x / (x * x + gam * gam * omega_au**2)
        a0 += 2.0 / (3.0 * (2 * float(J) + 1)) * d * d * f
        if J > Fraction(1, 2):
            Jf = float(J)
            c = math.sqrt(5 * Jf * (2 * Jf - 1) / (6 * (Jf + 1) * (2 * Jf + 1) * (2 * Jf + 3)))
            sj = float(wigner_6j(Rational(J.numerator, J.denominator), 1, Rational(Jp.numerator, Jp.denominator), 1,
                                  Rational(J.numerator, J.denominator), 2))
            sign = -1 if int(J + Jp) % 2 else 1
            a2 += 4 * c * sign * sj * d * d * f
    return a0, a2


for lab in ("6S1/2", "6P3/2"):
    print(lab, "static", "%.15e %.15e" % alpha(lab))
    print(lab, "static-undamped", "%.15e %.15e" % alpha(lab, damping=False))
