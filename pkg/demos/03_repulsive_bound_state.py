"""
A bound state in a repulsive potential
======================================

V = -V0/r**2 with 2 m V0 = -1/4 is repulsive and P = sqrt(1/2).  Both
near-origin branches are square integrable, so the norm alone does not
fix the boundary condition.  Admixing the irregular branch produces a
negative-energy state that the regular condition does not have.
"""

from radialbc import EigenProblem, InverseSquare, Mixed, NotFound, build_grid, extrapolate_origin, scan, solve
from radialbc.claims import sae_bound_state_energy

pot = InverseSquare(-0.125)
grid = build_grid(1e-6, 40.0, 20001)
window = (-10.0, -1e-8)

try:
    solve(EigenProblem(pot, grid=grid, energy_window=window), 0)
except NotFound as exc:
    print("regular condition:", exc)

for g in (-1.0, -0.5, -2.0, 1.0):
    prob = EigenProblem(pot, bc=Mixed(g, r_ref=1.0), grid=grid, energy_window=window)
    states = scan(prob, 1).states
    if not states:
        print(f"Mixed(g={g:+g}): no state below zero")
        continue
    E = states[0].energy
    oracle = sae_bound_state_energy(-0.125, g=g)
    fit = extrapolate_origin(states[0].samples, prob.ix.s_minus)
    print(f"Mixed(g={g:+g}): E = {E:.10f}, Bessel matching {oracle:.10f}, u diverges at 0: {fit.divergent}")
