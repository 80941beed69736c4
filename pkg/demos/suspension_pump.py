# Interpolating to a reference, closing the loop, and pumping charge.
import numpy as np

from tenfold import models, suspension
from tenfold.model import KGrid, flatten

grid = KGrid(1, 201)

# A trivial SSH chain deforms to sigma_x without closing the gap.
half = suspension.build_interpolation(flatten(models.ssh(1.5, 1.0), grid), models.sx)
print("trivial chain: min gap along the path", round(half.min_gap, 4))

full = suspension.extend_symmetric(half, "C", models.sz)
print("particle-hole extension residual", full.extension_residual)
print("the closed loop pumps", suspension.pump_chern(full).value)

# A topological chain cannot reach the same reference.
try:
    suspension.build_interpolation(flatten(models.ssh(0.5, 1.0), grid), models.sx)
except suspension.Obstruction as exc:
    print(f"topological chain: gap closes near k={exc.k[0]:.3f}, theta={exc.theta:.3f}")

# Reading QWZ as a loop of 1D chains (theta = k_y) gives a Thouless pump.
pump = suspension.pump_family_from_model(models.qwz(1.0), 61, 61)
print("QWZ pump:", suspension.pump_chern(pump).value,
      " reversed:", suspension.pump_chern(suspension.reverse_theta(pump)).value)

# The same count for the Rice-Mele cycle.
rm = suspension.family_from_loop(models.rice_mele, 61, 61)
print("Rice-Mele pump:", suspension.pump_chern(rm).value)
