"""
Hydrogen and the oscillator with u(0) = 0
=========================================

With the regular condition the shooting solver reproduces the textbook
spectra.  Halving the step shows the fourth-order convergence of Numerov.
"""

from radialbc import Coulomb, EigenProblem, Harmonic, build_grid, scan, solve

grid = build_grid(1e-6, 80.0, 20001)
for l in (0, 1):
    res = scan(EigenProblem(Coulomb(1.0), l=l, grid=grid), 2)
    for state in res:
        n = state.nodes + l + 1
        print(f"hydrogen n={n} l={l}: E = {state.energy:.12f}  (exact {-0.5 / n**2:.12f})")

grid = build_grid(1e-6, 10.0, 20001)
for state in scan(EigenProblem(Harmonic(1.0), l=1, grid=grid), 2):
    print(f"oscillator n_r={state.nodes} l=1: E = {state.energy:.12f}  (exact {2 * state.nodes + 2.5})")

# error of the hydrogen ground state as the grid is refined
print()
prev = None
for n in (1001, 2001, 4001):
    err = abs(solve(EigenProblem(Coulomb(1.0), grid=build_grid(1e-6, 30.0, n)), 0).energy + 0.5)
    ratio = "" if prev is None else f"  ratio {prev / err:.2f}"
    print(f"n_points={n:5d}: |E + 1/2| = {err:.3e}{ratio}")
    prev = err
