"""
Classifying the origin and reading off the exponents
====================================================

Near r = 0 the reduced radial function behaves as r**s.  The two
exponents depend only on l, the mass and lam = lim r**2 V(r).
"""

from radialbc import Coulomb, InverseSquare, admissibility, classify_origin, indicial

# Coulomb is regular at the origin: r**2 V -> 0
for l in range(3):
    ix = indicial(l, 1.0, classify_origin(Coulomb(1.0)))
    print(f"Coulomb l={l}: s+ = {ix.s_plus:g}, s- = {ix.s_minus:g}")

# an inverse-square term shifts both exponents through P
print()
for V0 in (0.12, 0.0625, -0.125, -0.3, 0.125, 0.3):
    ix = indicial(0, 1.0, classify_origin(InverseSquare(V0)))
    if ix.P is None:
        print(f"V0={V0:+.4f}: {ix.regime.value} (exponents complex)")
        continue
    line = f"V0={V0:+.4f}: P={ix.P:.4f} s+={ix.s_plus:.4f} s-={ix.s_minus:.4f} {ix.regime.value}"
    if ix.P > 0:
        rep = admissibility(ix)
        rejected = [name for name, ok in rep.irregular.items() if not ok]
        line += f"  irregular rejected by: {', '.join(rejected) or 'none'}"
    print(line)

# for 1/2 <= P < 1 the criteria disagree: the irregular branch is square
# integrable yet does not vanish at the origin
rep = admissibility(indicial(0, 1.0, classify_origin(InverseSquare(-0.125))))
print("\ndisagreement window:", rep.disagreement_window)
