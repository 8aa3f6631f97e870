"""Scalar-flat ALE metrics on the blow-up of C^m at the origin.

For m = 2 the potential t/2 + log t is explicit. For m >= 3 the momentum
profile is found by shooting, then checked by recomputing the scalar
curvature from the sampled profile.
"""

import numpy as np

from kaehler_blowup_lab.radial_metrics import (
    RadialPotential,
    burns_simanca,
    burns_simanca_psi0,
    radial_scalar_curvature,
)

t = np.geomspace(1e-2, 1e4, 1000)
s = radial_scalar_curvature(RadialPotential.burns_simanca_2(), t)
print(f"m=2 closed form: max|s| = {np.max(np.abs(s)):.1e}")

for m in (3, 4):
    prof = burns_simanca(m)
    print(f"m={m}: psi(0+) = {prof.psi0:.8f} (first integral {burns_simanca_psi0(m):.8f}), "
          f"max|s| = {prof.max_residual():.1e}, psi - t/2 ~ t^{prof.decay_exponent():.3f}")
