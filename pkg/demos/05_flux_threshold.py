"""
Flux through a shrinking sphere
===============================

For psi = u~(r) / r**s the probability current through a sphere of radius a
scales as a**(2 - 2s).  It vanishes for s < 1, stays finite at s = 1 and
blows up beyond; with a real u~ it is zero whatever s is.
"""

from radialbc import FluxProbe, flux_limit

for s in (0.25, 0.5, 0.9, 1.0, 1.1, 1.5):
    res = flux_limit(FluxProbe(s, (1.0, 1j)))
    print(f"s={s:<4g} u~=1+ir:  {res.classification:9s} limit {res.limit:g}")

res = flux_limit(FluxProbe(1.5, (1.0, 0.3, -0.2)))
print(f"s=1.5  real u~:  {res.classification:9s} limit {res.limit:g}")

# the Richardson table behind the s = 1 value
res = flux_limit(FluxProbe(1.0, (1.0, 1j)))
for row in res.table_rows()[:4]:
    print("  ".join(f"{x:.10f}" for x in row))
