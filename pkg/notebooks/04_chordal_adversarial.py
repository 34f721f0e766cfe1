"""
A split graph where the ranking matters
=======================================

The X/Y split graph has a clique X = {x_1..x_k} and an independent set
Y = {y_1..y_k}, with x_i adjacent to y_j exactly when j <= i, so x_k sees
all of Y.  Under an unlucky ranking the radius search adds k antipodes,
although {y_1, y_k} already certifies the radius.
"""

import numpy as np

from eccert import radius
from eccert.certificates import verify_radius_certificate
from eccert.chordal import chordal_certificate_checks, is_chordal
from eccert.generators import gen_xy_chordal
from eccert.graph import Ranking

k = 25
g = gen_xy_chordal(k)
print("chordal:", is_chordal(g)[0], "n =", g.n)

rank = np.arange(2 * k, dtype=np.int64)
y = lambda j: k + j - 1  # node id of y_j
rank[y(2)], rank[y(1)] = 2 * k - 1, 2 * k - 2
for j in range(3, k + 1):
    rank[y(j)] = 2 * k - j
bad = Ranking(rank, "adversarial")

for label, ranking in (("identity", Ranking.identity(g.n)), ("adversarial", bad)):
    r = radius(g, ranking)
    print(f"{label:>12}: radius {r.value}, center {r.center}, |L| = {len(r.L)}, sweeps {r.report.sweeps}")

print("{y_1, y_k} certifies:", bool(verify_radius_certificate(g, [y(1), y(k)], 1, center=k - 1)))
print(chordal_certificate_checks(g))
