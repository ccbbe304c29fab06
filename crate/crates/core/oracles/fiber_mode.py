"""Independent HE11 solve (coarse scan + bisection) and power normalization via scipy."""
import numpy as np
from scipy import special as sp, integrate, optimize

EPS0 = 8.8541878128e-12
MU0 = 1.25663706212e-6
C = 299792458.0


def sellmeier(lam_um):
    l2 = lam_um**2
    return np.sqrt(1 + 0.6961663 * l2 / (l2 - 0.0684043**2) + 0.4079426 * l2 / (l2 - 0.1162414**2)
                   + 0.8974794 * l2 / (l2 - 9.896161**2))


def standard_eq(beta, a, n1, n2, k):
    # textbook hybrid-mode characteristic equation, nu = 1
    u = a * np.sqrt(n1**2 * k**2 - beta**2)
    w = a * np.sqrt(beta**2 - n2**2 * k**2)
    jj = sp.jvp(1, u) / (u * sp.jv(1, u))
    kk = sp.kvp(1, w) / (w * sp.kv(1, w))
    lhs = (jj + kk) * (jj + (n2 / n1) ** 2 * kk)
    rhs = (beta / (n1 * k)) ** 2 * (1 / u**2 + 1 / w**2) ** 2
    return lhs - rhs


def solve(a, lam, n1, n2=1.0):
    k = 2 * np.pi / lam
    lo, hi = n2 * k, n1 * k
    grid = np.linspace(lo, hi, 4001)[1:-1]
    vals = [standard_eq(b, a, n1, n2, k) for b in grid]
    roots = []
    for i in range(len(grid) - 1):
        if np.sign(vals[i]) != np.sign(vals[i + 1]):
            r = optimize.brentq(standard_eq, grid[i], grid[i + 1], args=(a, n1, n2, k), xtol=1e-14, rtol=1e-15)
            if abs(standard_eq(r, a, n1, n2, k)) < 1e-6:
                roots.append(r)
    return max(roots), k


def power(a, lam, n1, n2=1.0):
    beta, k = solve(a, lam, n1, n2)
    omega = C * k
    h = np.sqrt(n1**2 * k**2 - beta**2)
    q = np.sqrt(beta**2 - n2**2 * k**2)
    s = (1 / (h * a) ** 2 + 1 / (q * a) ** 2) / (
        sp.jvp(1, h * a) / (h * a * sp.jv(1, h * a)) + sp.kvp(1, q * a) / (q * a * sp.kv(1, q * a)))
    cin = q * sp.kv(1, q * a) / (h * sp.jv(1, h * a))

    def fields(r):
        if r < a:
            er = 1j * cin * ((1 - s) * sp.jv(0, h * r) - (1 + s) * sp.jv(2, h * r))
            ep = cin * ((1 - s) * sp.jv(0, h * r) + (1 + s) * sp.jv(2, h * r))
            ez = cin * 2 * h / beta * sp.jv(1, h * r)
            dez = cin * 2 * h / beta * h * sp.jvp(1, h * r)
        else:
            er = 1j * ((1 - s) * sp.kv(0, q * r) + (1 + s) * sp.kv(2, q * r))
            ep = (1 - s) * sp.kv(0, q * r) - (1 + s) * sp.kv(2, q * r)
            ez = 2 * q / beta * sp.kv(1, q * r)
            dez = 2 * q / beta * q * sp.kvp(1, q * r)
        return er, ep, ez, dez

    def sz(r):
        er, ep, ez, dez = fields(r)
        hr = -(ez / r + beta * ep) / (omega * MU0)
        hp = (beta * er + 1j * dez) / (omega * MU0)
        return 0.5 * np.real(er * np.conj(hp) - ep * np.conj(hr))

    pin = integrate.quad(lambda r: 2 * np.pi * r * sz(r), 0, a, epsabs=0, epsrel=1e-13, limit=200)[0]
    pout = integrate.quad(lambda r: 2 * np.pi * r * sz(r), a, a + 60 / q, epsabs=0, epsrel=1e-13, limit=400)[0]
    return beta, k, h, q, s, pin + pout


if __name__ == "__main__":
    for lam_nm in (934.5, 685.5):
        print("n1(%.1f nm) = %.12f" % (lam_nm, sellmeier(lam_nm / 1000)))
    a = 0.2e-6
    for lam in (934.5e-9, 685.5e-9):
        n1 = sellmeier(lam * 1e6)
        beta, k, h, q, s, p1 = power(a, lam, n1)
        print("lambda", lam, "beta %.15e beta/k %.15f q %.12e h %.12e s %.15f" % (beta, beta / k, q, h, s))
        print("  P(A=1) = %.15e W   A(11.5 mW) = %.15e V/m" % (p1, np.sqrt(11.5e-3 / p1)))
