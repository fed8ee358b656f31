"""Walkthrough: when does a symmetric start exist?

For sqrtshift:a=1 the function g(r) = r - f(r^2) is bounded below by -1,
so phi''(0) can be solved for only when eta(phi0) < 1.  In S^2 this is
cot(phi0) < 1, i.e. phi0 > pi/4; in H^2 coth(phi0) > 1 always, so no
start exists at all.
"""
import math

from rotweingarten import H2, S2, EllipticFunction, compute_limits, existence_gate
from rotweingarten.cli import run_sweep
from rotweingarten.config import RunConfig

F = EllipticFunction.sqrtshift(1.0)
lim = compute_limits(F)
print(f"limits of g: ell_minus = {lim.ell_minus}, ell_plus = {lim.ell_plus}")

for phi0 in (0.6, math.pi / 4, 0.8):
    gate = existence_gate(F, S2, phi0, 1, lim)
    print(f"S2 phi0={phi0:.6f}: {gate.lhs:.6f} < {gate.rhs} ? {gate.holds}")

# the sweep runs each phi0 through integration and classification
phis = [math.pi / 8, 3 * math.pi / 16, math.pi / 4 + 0.01, 5 * math.pi / 16, 3 * math.pi / 8]
for row, _ in run_sweep(RunConfig(family="sqrtshift:a=1", epsilon=1), phis):
    print(f"  phi0={row[0]:.6f}  {row[1]}")

print()
for phi0 in (0.1, 1.0, 5.0):
    gate = existence_gate(F, H2, phi0, 1, lim)
    print(f"H2 phi0={phi0}: coth = {gate.lhs:.6f} vs {gate.rhs}: holds={gate.holds}")
