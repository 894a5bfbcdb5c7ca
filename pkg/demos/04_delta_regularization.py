"""
The point source hidden in 1/r
==============================

Smearing 1/r into 1/sqrt(r**2 + a**2) turns its Laplacian into a smooth
bump of unit weight that collapses onto the origin as a -> 0.  A radial
function with u(0) != 0 therefore sources a delta function of strength
2 pi u(0) / m.
"""

import numpy as np

from radialbc import diagnostics as dg

radii = np.logspace(-8, 1, 10)
for a in (1e-3, 1e-1, 1.0):
    print(f"a={a:g}: identity error {dg.regularized_laplacian_check(a, radii):.2e}")

print()
for a in (1e-1, 1e-2, 1e-3, 1e-4):
    res = dg.delta_unit_integral(a, R=1.0)
    print(f"a={a:g}: total {res.total:.15f}, weight outside r=1: {res.exterior_fraction:.3e}")

print()
for u0, m in ((1.0, 1.0), (2.0, 0.5), (0.0, 1.0)):
    exact = dg.delta_source_strength(u0, m)
    witness = dg.richardson_source_strength(u0, m, a=1e-3)
    print(f"u(0)={u0:g}, m={m:g}: strength {exact:.10f}, regularised {witness:.10f}")
