# Anticommuting complex structures J_1..J_k and the geodesics joining them.
import numpy as np

from tenfold import clifford

cs = clifford.generate(4)
print("N =", cs.N, "with", len(cs), "structures")
print("Clifford residual:", clifford.clifford_residual(cs))

# L_i runs from J_i to -J_i and passes through J_{i+1} halfway.
for i in range(len(cs)):
    lam = np.linspace(0, np.pi, 5)
    start = np.eye(cs.N) if i == 0 else cs.J[i - 1]
    dist = [np.abs(clifford.geodesic(cs, i, t) - start).max() for t in lam]
    print(f"L_{i}: distance from start at lam=0..pi", np.round(dist, 3),
          " midpoint residual", clifford.midpoint_residual(cs, i))

# Every point of L_i is itself a complex structure anticommuting with J_1..J_{i-1}.
ok = all(clifford.is_complex_structure(clifford.geodesic(cs, 2, t), cs.J[:1])
         for t in np.linspace(0, np.pi, 50))
print("L_2 stays inside the nested space:", ok)
