"""Tour of the exponential-polynomial algebra that powers everything.

Every path in the model (baseline emissions, abatement, cumulative
emissions, temperature) is a finite sum of c * t^n * exp(mu t) terms.
That family is closed under the operations the control problem needs,
and discounted infinite-horizon integrals have an exact closed form, so
no time stepping ever happens.
"""

import numpy as np

from mmrclimate import ExpPoly

# a toy "emissions" curve: rises, peaks, decays
f = ExpPoly(((0.5, 1, -0.02), (3.0, 0, -0.02)))
print("f(t) =", f)
print("f at t = 0, 50, 200:", [round(f(t), 4) for t in (0.0, 50.0, 200.0)])

# algebra: sums and products stay in the family
g = ExpPoly.term(2.0, 0, -0.01)
print("\nf + g =", f + g)
print("f * g =", f * g)

# calculus: exact derivative and running integral
print("\nd/dt f =", f.derivative())
cum = f.cumulative()
print("integral of f over [0, 100] =", round(cum(100.0), 6))
print("  (trapezoid check:", round(np.trapezoid(f(np.linspace(0, 100, 100001)),
      np.linspace(0, 100, 100001)), 6), ")")

# the workhorse: exact discounted integrals over [0, infinity)
delta = 0.03
exact = f.discounted_integral(delta)
grid = np.linspace(0.0, 3000.0, 3_000_001)
numeric = np.trapezoid(f(grid) * np.exp(-delta * grid), grid)
print(f"\nintegral of f e^(-{delta} t) over [0, inf):")
print(f"  closed form : {exact:.10f}")
print(f"  quadrature  : {numeric:.10f}")

# rates >= delta diverge, and the algebra says so instead of guessing
try:
    ExpPoly.term(1.0, 0, 0.05).discounted_integral(0.03)
except Exception as err:
    print("\ngrowing term under weak discounting ->", type(err).__name__, "-", err)
