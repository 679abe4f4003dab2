"""Derive the manufactured-solution forcing symbolically and emit numpy code.

Run once after changing the manufactured fields or the constitutive laws:

    python3 scripts/generate_mms.py > src/mixflow/_mms_forcing.py

The manufactured solution is 1D, two species, on a unit period, with the
density kept above 1 so only the compressed branch of the cold pressure
appears. Material constants stay symbolic and become function arguments.
"""
import sympy as sp

x, t = sp.symbols("x t", real=True)
c_v, m1, m2, e1, e2 = sp.symbols("c_v m1 m2 e1 e2", positive=True)
c2, gp = sp.symbols("c2 gamma_plus", positive=True)
mu0, mu1, kappa0, alpha, d0, rate = sp.symbols("mu0 mu1 kappa0 alpha d0 rate", positive=True)
PARAMS = [c_v, m1, m2, e1, e2, c2, gp, mu0, mu1, kappa0, alpha, d0, rate]

k = 2 * sp.pi
rho = 2 + sp.Rational(1, 5) * sp.sin(k * x - t)
u = sp.Rational(1, 2) + sp.Rational(1, 5) * sp.cos(k * x + 2 * t)
theta = 1 + sp.Rational(1, 5) * sp.cos(k * x - t)
Y1 = sp.Rational(1, 2) + sp.Rational(1, 5) * sp.sin(k * x + t)
Y2 = 1 - Y1

rho1, rho2 = rho * Y1, rho * Y2
p1, p2 = theta * rho1 / m1, theta * rho2 / m2
pi_m = p1 + p2
pi_c = c2 / gp * (rho ** gp - 1)
e_c = c2 / gp * ((rho ** (gp - 1) - 1) / (gp - 1) + 1 / rho - 1)
e = Y1 * e1 + Y2 * e2 + c_v * theta + e_c
E = e + u ** 2 / 2

mu = mu0 + mu1 * rho
nu = 2 * rho * mu1 - 2 * mu
S = (2 * mu + nu) * sp.diff(u, x)
kap = kappa0 * (1 + rho) * (1 + theta ** alpha)
C0 = d0 * rho * (1 + theta)
dpi_m = sp.diff(pi_m, x)
F1 = -(C0 / pi_m) * (sp.diff(p1, x) - Y1 * dpi_m)
F2 = -(C0 / pi_m) * (sp.diff(p2, x) - Y2 * dpi_m)
h1 = e1 + (c_v + 1 / m1) * theta
h2 = e2 + (c_v + 1 / m2) * theta
Q = h1 * F1 + h2 * F2 - kap * sp.diff(theta, x)
pi = pi_m + pi_c
omega1 = -rate * Y1

residuals = [
    sp.diff(rho, t) + sp.diff(rho * u, x),
    sp.diff(rho * u, t) + sp.diff(rho * u ** 2 + pi - S, x),
    sp.diff(rho * E, t) + sp.diff((rho * E + pi) * u + Q - S * u, x),
    sp.diff(rho1, t) + sp.diff(rho1 * u + F1, x) - rho * theta * omega1,
    sp.diff(rho2, t) + sp.diff(rho2 * u + F2, x) + rho * theta * omega1,
]


def emit():
    args = ", ".join(str(p) for p in PARAMS)
    lines = [
        '"""Generated by scripts/generate_mms.py; do not edit by hand."""',
        "import numpy as np",
        "",
        "PARAMS = (" + ", ".join(repr(str(p)) for p in PARAMS) + ",)",
        "",
        "",
        "def primitives(x, t):",
        '    """(rho, u, theta, Y1) of the manufactured solution."""',
    ]
    printer = sp.printing.numpy.NumPyPrinter()
    for name, expr in (("rho", rho), ("u", u), ("theta", theta), ("Y1", Y1)):
        lines.append(f"    {name} = {printer.doprint(expr)}")
    lines += ["    return rho, u, theta, Y1", "", ""]
    lines.append(f"def forcing(x, t, {args}):")
    lines.append('    """Rows: rho, rho*u, rho*E, rho_1, rho_2."""')
    subexprs, reduced = sp.cse(residuals, optimizations="basic")
    for sym, expr in subexprs:
        lines.append(f"    {sym} = {printer.doprint(expr)}")
    for i, expr in enumerate(reduced):
        lines.append(f"    f{i} = {printer.doprint(expr)}")
    lines.append("    return tuple(np.broadcast_to(f, np.shape(x)) for f in (f0, f1, f2, f3, f4))")
    return "\n".join(lines).replace("numpy.", "np.") + "\n"


if __name__ == "__main__":
    print(emit(), end="")
