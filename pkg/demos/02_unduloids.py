"""Walkthrough: periodic profiles in S^2 x R.

Starting below the equator the profile oscillates between phi_min and
phi_max on either side of it, crossing the equator at inflection points.
The minimal case phi0 = pi/4 has phi_max = 3 pi / 4.
"""
import math

import numpy as np

from rotweingarten import S2, EllipticFunction, ShootingSpec, classify, integrate_profile

P = integrate_profile(ShootingSpec(EllipticFunction.zero(), S2, math.pi / 4))
rep = classify(P)
print(f"minimal, phi0 = pi/4: {rep.kind}")
print(f"  phi_max - 3pi/4 = {rep.phi_max - 3 * math.pi / 4:.2e}")
print(f"  period T = {rep.period_T:.12f}, vertical period = {rep.vertical_period:.12f}")

# shift by one period and compare
s = P.s[(P.s >= 0) & (P.s <= 2 * rep.period_T)]
a, b = P.dense(s), P.dense(s + rep.period_T)
print(f"  max |phi(s+T) - phi(s)| = {np.max(np.abs(b[:, 0] - a[:, 0])):.2e}")

# the same neck height under a few relations
print()
print(f"{'family':28s} {'phi_max':>10s} {'T':>10s} {'T~':>10s}")
for F in (EllipticFunction.zero(), EllipticFunction.rational(1.2),
          EllipticFunction.rational(-1.2), EllipticFunction.sqrtshift(0.5)):
    r = classify(integrate_profile(ShootingSpec(F, S2, 0.9)))
    print(f"{F.to_spec():28s} {r.phi_max:10.6f} {r.period_T:10.6f} {r.vertical_period:10.6f}")

# phi'' changes sign exactly at the equator
P = integrate_profile(ShootingSpec(EllipticFunction.sqrtshift(1.0), S2, 0.9))
below = P.phi < math.pi / 2
print()
print(f"sqrtshift:a=1, phi0=0.9: phi'' > 0 below the equator at {np.mean(P.phi_pp[below] > 0):.0%} of samples, "
      f"< 0 above at {np.mean(P.phi_pp[~below] < 0):.0%}")
