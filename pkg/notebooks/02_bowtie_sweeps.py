"""
Sweep counts on bow-tie graphs
==============================

BT(p, q) has p long spokes on each side of a central hub.  Starting the
diameter search from a center keeps the number of sweeps flat in p, while
the basic variant pays for every spoke.
"""

import time

from eccert import diameter, radius
from eccert.generators import bowtie_size, gen_bowtie

print(f"{'p':>4} {'q':>4} {'n':>7} {'diam':>5} {'rad':>4} {'radius':>7} "
      f"{'basic':>6} {'center':>7} {'delegate':>9}")
for q in (6, 10):
    for p in (2, 5, 20):
        g = gen_bowtie(p, q)
        r = radius(g)
        sweeps = {v: diameter(g, variant=v).report.sweeps
                  for v in ("basic", "center_init_delegate", "delegate")}
        print(f"{p:>4} {q:>4} {g.n:>7} {4 * q - 2:>5} {r.value:>4} {r.report.sweeps:>7} "
              f"{sweeps['basic']:>6} {sweeps['center_init_delegate']:>7} {sweeps['delegate']:>9}")

# The large instance: half a million nodes, still a handful of sweeps.
t0 = time.perf_counter()
big = gen_bowtie(500, 500)
print(f"\nBT(500,500): {big.n} nodes (expected {bowtie_size(500, 500)}), built in {time.perf_counter() - t0:.1f}s")
t0 = time.perf_counter()
d = diameter(big, variant="center_init_delegate")
print(f"diameter {d.value}, radius {d.radius.value}, {d.report.sweeps} sweeps, "
      f"|U|={len(d.U)}, {time.perf_counter() - t0:.1f}s")
