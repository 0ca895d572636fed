"""Independent oracles for frozen expected values in the C++ tests.

Run with: python3 tests/oracles/oracles.py
Uses sympy (exact/symbolic) and mpmath (50-digit root isolation); shares no
code with the C++ implementation.
"""
import sympy as sp
import mpmath as mp

mp.mp.dps = 50


def constants(n):
    n = sp.Integer(n)
    mu = [((n - 6) / 2) ** 2, ((n - 2) / 2) ** 2, ((n + 2) / 2) ** 2]
    K4 = (3 * n**2 - 12 * n + 44) / 4
    K2 = (3 * n**4 - 24 * n**3 + 72 * n**2 - 96 * n + 304) / 16
    K0 = mu[0] * mu[1] * mu[2]
    Qn = n * (n**4 - 20 * n**2 + 64) / 32
    cn = (n - 6) / 2 * Qn
    return mu, K4, K2, K0, Qn, cn


print("== dimension constants")
for n in (7, 8, 9, 10):
    mu, K4, K2, K0, Qn, cn = constants(n)
    assert K4 == sum(mu)
    assert K2 == mu[0] * mu[1] + mu[0] * mu[2] + mu[1] * mu[2]
    p = sp.Rational(n + 6, n - 6)
    # eps* by direct root isolation of K0 v = cn v^p on (0, 1)
    f = lambda v: K0 * v - cn * v ** p
    root = mp.findroot(lambda v: mp.mpf(K0) - mp.mpf(cn) * v ** (mp.mpf(p) - 1), (mp.mpf("0.01"), mp.mpf("1")), solver="anderson")
    print(n, "mu", mu, "K4", K4, "K2", K2, "K0", K0, float(K0), "Qn", Qn, "cn", cn, "eps*", mp.nstr(root, 20))

print("== n=7 linearised frequency")
mu, K4, K2, K0, Qn, cn = constants(7)
p = 13
s = sp.symbols("s")
cubic = s**3 + K4 * s**2 + K2 * s - (p - 1) * K0
roots = [r for r in sp.Poly(cubic, s).nroots(n=30) if r.is_real and r > 0]
sig = roots[0]
print("sigma", sig, "omega", sp.sqrt(sig).evalf(20), "period", (2 * sp.pi / sp.sqrt(sig)).evalf(20))
for n in range(7, 21):
    mu_, K4_, K2_, K0_, _, _ = constants(n)
    pp = sp.Rational(n + 6, n - 6)
    c = sp.Poly(s**3 + K4_ * s**2 + K2_ * s - (pp - 1) * K0_, s)
    pos = [r for r in c.nroots() if r.is_real and r > 0]
    assert len(pos) == 1, n

print("== jets of (cosh t)^(-1/2) at t=0 (n=7)")
t = sp.symbols("t", real=True)
g = sp.cosh(t) ** sp.Rational(-1, 2)
print([sp.nsimplify(sp.diff(g, t, k).subs(t, 0)) for k in range(7)])

print("== cylinder Hamiltonian, n=7")
eps = mp.mpf(K0 / cn) ** (mp.mpf(1) / 12)
H = -mp.mpf(3) / 7 * mp.mpf(K0) * eps**2
print("H_cyl", mp.nstr(H, 20), "omega_6", mp.nstr(16 * mp.pi**3 / 15, 20), "P_cyl", mp.nstr(16 * mp.pi**3 / 15 * H, 20))
print("rhs at eps*/2:", mp.nstr(mp.mpf(K0) * eps / 2 - mp.mpf(cn) * (eps / 2) ** 13, 20))

print("== bi-Laplacian of u^a, radial, generic u")
r, nn = sp.symbols("r n", positive=True)
u = sp.Function("u")(r)
a = (nn - 4) / (nn - 6)
lap = lambda f: sp.diff(f, r, 2) + (nn - 1) / r * sp.diff(f, r)
lhs = lap(lap(u**a))
up, upp = sp.diff(u, r), sp.diff(u, r, 2)
Lu = lap(u)
grad_dot = up * sp.diff(Lu, r)
D2sq = upp**2 + (nn - 1) * (up / r) ** 2
D2uu = upp * up**2
corrected = (a * u ** (a - 1) * lap(Lu) + 4 * a * (a - 1) * u ** (a - 2) * grad_dot
             + 2 * a * (a - 1) * u ** (a - 2) * D2sq + a * (a - 1) * u ** (a - 2) * Lu**2
             + 4 * a * (a - 1) * (a - 2) * u ** (a - 3) * D2uu
             + 2 * a * (a - 1) * (a - 2) * u ** (a - 3) * up**2 * Lu
             + a * (a - 1) * (a - 2) * (a - 3) * u ** (a - 4) * up**4)
printed = ((nn - 4) / (nn - 6) * u ** (2 / (nn - 6)) * lap(Lu)
           + 8 * (nn - 4) / (nn - 6) ** 2 * u ** ((8 - nn) / (nn - 6)) * grad_dot
           + 4 * (nn - 4) / (nn - 6) ** 2 * u ** ((8 - nn) / (nn - 6)) * D2sq
           + 8 * (nn - 4) * (8 - nn) / (nn - 6) ** 3 * u ** (-2 * (nn - 7) / (nn - 6)) * D2uu
           + 4 * (nn - 4) * (8 - nn) / (nn - 6) ** 3 * u ** (-2 * (nn - 7) / (nn - 6)) * up**2 * Lu
           + 2 * (nn - 7) * (nn - 8) / (nn - 6) ** 4 * u ** ((20 - 3 * nn) / (nn - 6)) * up**4)
test = {u: sp.exp(-r**2) + 2}
for nv in (7, 9):
    for rv in (sp.Rational(1, 2), sp.Integer(2)):
        L = lhs.subs(u, test[u]).doit().subs({nn: nv, r: rv}).evalf(30)
        C = corrected.subs(u, test[u]).doit().subs({nn: nv, r: rv}).evalf(30)
        P = printed.subs(u, test[u]).doit().subs({nn: nv, r: rv}).evalf(30)
        print("n", nv, "r", rv, "direct", L, "corrected-defect", sp.N(L - C, 5), "printed-defect", sp.N(L - P, 5))

print("== round-sphere curvatures")
for nv in (7, 9):
    us = ((1 + r**2) / 2) ** (-(sp.Integer(nv) - 6) / 2)
    lapn = lambda f: sp.diff(f, r, 2) + (nv - 1) / r * sp.diff(f, r)
    aa = sp.Rational(nv - 4, nv - 6)
    q4 = sp.Rational(2, nv - 4) * us ** (-sp.Rational(nv + 4, nv - 6)) * lapn(lapn(us**aa))
    q2 = -sp.Rational(4 * (nv - 1), nv - 6) * us ** (-sp.Rational(nv - 2, nv - 6)) * (lapn(us) + sp.Rational(4, nv - 6) * sp.diff(us, r) ** 2 / us)
    print("n", nv, "Q4", [sp.nsimplify(sp.simplify(q4.subs(r, rv))) for rv in (sp.Rational(1, 3), 1, 3)],
          "Q2", [sp.nsimplify(sp.simplify(q2.subs(r, rv))) for rv in (sp.Rational(1, 3), 1, 3)])

print("== mean curvature of |x|=r in g0 (first variation of area)")
nv = 7
rho = 2 / (1 + r**2)
area = (rho * r) ** (nv - 1)
Hs = sp.simplify(sp.diff(sp.log(area), r) / rho)
print("H(r) =", sp.factor(Hs), "H(1) =", Hs.subs(r, 1), "H(4) =", Hs.subs(r, 4))
printedH = -2 * nv * r * (1 + r**2) + (nv - 1 + nv * r**2) / r
print("printed H(1) =", printedH.subs(r, 1))

print("== Q2 of cylinder factor c r^-gamma, n=7")
c = sp.symbols("c", positive=True)
gam = sp.Rational(1, 2)
uc = c * r ** (-gam)
lap7 = lambda f: sp.diff(f, r, 2) + 6 / r * sp.diff(f, r)
print(sp.simplify(-lap7(uc) - 4 * sp.diff(uc, r) ** 2 / uc))
