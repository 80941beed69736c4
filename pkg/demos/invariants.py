# One invariant per nontrivial entry the builtins reach.
import numpy as np

from tenfold import invariants, models
from tenfold.model import KGrid, flatten
from tenfold.symmetry import classify

print("SSH winding across the transition at v = w")
for v in (0.2, 0.6, 0.9, 1.1, 1.6):
    print(f"  v={v}:", invariants.winding(models.ssh(v, 1.0), models.sz).value)

print("QWZ Chern number against the mass")
for m in (-3, -1.5, -0.5, 0.5, 1.5, 3):
    r = invariants.chern(flatten(models.qwz(m), KGrid(2, 61)))
    print(f"  m={m:+}: C={r.value:+d}  (rounding residual {r.residual:.1e})")

print("Kitaev chain Majorana number, -1 in the topological phase")
for mu in (0.0, 1.0, 1.9, 2.1, 3.0):
    print(f"  mu={mu}:", invariants.majorana_z2(models.kitaev(1, 1, mu), models.sx).value)

print("BHZ Kane-Mele index")
U_T = models.bhz_symmetries().tr
for m in (-1.0, 1.0, 3.0):
    r = invariants.kane_mele_z2(flatten(models.bhz(m), KGrid(2, 100)), U_T)
    print(f"  m={m}:", r.value)

# The dispatcher picks the invariant from the class and the dimension.
for name in models.BUILTINS:
    model, spec = models.builtin(name)
    az = classify(model, spec)
    r = invariants.invariant_for(model, az, model.dim, spec)
    print(f"{name:>10}: class {az.label:<4} ->", r.kind, getattr(r, "value", ""))
