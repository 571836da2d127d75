# Special points of f(x, y) = (xy + c, x) and how they behave.
import numpy as np

from planejulia import fixed_points, stability, three_cycle, apply

c = -0.5
fp = fixed_points(c)
print("a1, a2:", fp.a1, fp.a2)
print("alpha:", fp.alpha, stability(c, "Alpha").cls)
print("theta:", fp.theta, stability(c, "Theta").cls)

cyc = three_cycle(c)
print("cycle:", cyc.points(), stability(c, "Cycle").cls)

# one lap around the cycle comes back exactly
z = cyc.p
for _ in range(3):
    z = apply(z, c)
print("f^3(p) =", z)

# how the alpha multipliers move with c
for c in np.linspace(-0.95, -0.05, 7):
    lam = stability(c, "Alpha").eigenvalues
    print(f"c={c:+.2f}  |lambda| = {abs(lam[0]):.4f}")
