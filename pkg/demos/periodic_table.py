# The periodic table from the Bott clock, and the shift identities behind it.
from collections import Counter

from tenfold import bott

report = bott.generate_table()
print("cells matching the embedded table:", report.matches, "of", len(report.grid))

for family in ("complex", "real"):
    print()
    print(family)
    for s in range(bott.period(family)):
        row = [str(report.grid[family, s, d]) for d in range(8)]
        print(f"  {bott.LABELS[family][s]:<5}", " ".join(f"{c:>3}" for c in row))

# Every diagonal step (s+1, d+1) lands on the same group.
idx = bott.TableIndex("real", 2, 1)
print()
print("D in d=1:", idx.group)
print("after loop then suspend:", bott.suspend_shift(bott.loop_shift(idx)).group)
print("identities:", bott.check_periodicities())

# Each real column holds two Z, two Z2 and four trivial entries.
col = [str(bott.group_at("real", s, 3)) for s in range(8)]
print("real column d=3:", col, "->", dict(Counter(col)))
