"""Biharmonic extensions across the unit sphere and the matching map.

Each spherical-harmonic degree gives a 2x2 system relating boundary data
(h, k) to the jumps in the radial derivative of W and of its Laplacian.
"""

import sympy as sp

from kaehler_blowup_lab.biharmonic_match import (
    R,
    SphericalData,
    determinant_growth_exponent,
    exterior_extension,
    interior_extension,
    matching_matrices,
)

m = 2
W = interior_extension(SphericalData.zero(m), SphericalData.mode(m, 1, 0, 4 + 4 * m))
print("interior, k = 8 Y_1:", sp.expand(W.profile(1).to_sympy()))
W = exterior_extension(SphericalData.constant(m, 1), SphericalData.zero(m))
print("exterior, h = 1:    ", W.constant_part())

for m in (2, 3, 4, 5):
    mats = matching_matrices(m, 50)
    dets = [int(mm.det) for mm in mats[:4]]
    print(f"m={m}: det l=0..3 {dets}, any zero up to l=50: {any(mm.det == 0 for mm in mats)}, "
          f"growth exponent {determinant_growth_exponent(mats, lmin=40):.3f}")
print("constrained l=0 determinant:", matching_matrices(2, 0, "constrained")[0].det)
