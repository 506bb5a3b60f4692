"""Brute-force sigma^2 coefficient of the singular PDE for n=2, f0 = t^3/6.

Independent of the package (requires sympy): expands
Im[(1+i*phi_s/s)*((1+i*phi_tt)(1+i*phi_ss)+phi_st^2)] with
phi = f0 + f1 s^2/2 + f2 s^4/24 and solves the s^2 coefficient for f2(t).
The printed rational coefficients and pointwise values are frozen into
tests/test_engine.py and tests/test_acceptance.py.
"""
import sympy as sp

t, s = sp.symbols("t sigma", real=True)
f0 = t**3 / 6
f1 = -sp.tan(sp.atan(sp.diff(f0, t, 2)) / 2)
f2 = sp.Function("f2", real=True)(t)

phi = f0 + f1 * s**2 / 2 + f2 * s**4 / 24
phi_t = sp.diff(phi, t)
phi_s = sp.diff(phi, s)
phi_tt = sp.diff(phi, t, 2)
phi_ss = sp.diff(phi, s, 2)
phi_st = sp.diff(phi_s, t)

q = sp.simplify(phi_s / s)  # polynomial in s, even
lhs = sp.im(
    (1 + sp.I * q)
    * ((1 + sp.I * phi_tt) * (1 + sp.I * phi_ss) + phi_st**2)
    .rewrite(sp.Add)
)
# phi is real-valued symbolic, so im() needs expansion with real assumptions
expr = (1 + sp.I * q) * ((1 + sp.I * phi_tt) * (1 + sp.I * phi_ss) + phi_st**2)
expr = sp.expand(expr)
lhs = sp.simplify(sp.expand(sp.im(expr)))

coeff2 = sp.expand(lhs).coeff(s, 2)
sol = sp.solve(sp.Eq(coeff2, 0), f2)
assert len(sol) == 1
f2_closed = sp.simplify(sol[0])
print("f2 closed form:", f2_closed)

series = sp.series(f2_closed, t, 0, 14).removeO()
series = sp.nsimplify(sp.expand(series))
print("f2 series:", series)
coeffs = [sp.Rational(sp.expand(series).coeff(t, k)) for k in range(14)]
print("rational coeffs:", coeffs)
print("float coeffs:", [float(c) for c in coeffs])

# pointwise values to freeze as well
for tv in ["0.05", "0.1", "0.2"]:
    val = f2_closed.subs(t, sp.Rational(tv)).evalf(40)
    print("f2(%s) = %s" % (tv, val))
