"""
Certificates on small graphs
============================

Each solver returns the value together with the node sets that prove it.
This script walks through a path, a cycle and a star and checks every
certificate with the independent verifiers.
"""

import numpy as np

from eccert import all_eccentricities, diameter, radius
from eccert.certificates import verify_bundle, verify_radius_certificate
from eccert.generators import gen_cycle, gen_path, gen_star

# A path on five nodes: the center is node 2 and both ends are needed to
# prove that no node has eccentricity below 2.
p5 = gen_path(5)
r = radius(p5)
print("P5 radius", r.value, "center", r.center, "L", r.L, "sweeps", r.report.sweeps)
print("verified:", verify_bundle(p5, r.bundle).summary())

# Dropping one end breaks the proof: node 1 (or 3) is then within 1 of L.
print("without node 0:", verify_radius_certificate(p5, [4], 2).summary())

# On a cycle every node is symmetric, so the lower certificate has to be all
# of V and the run pays two sweeps per node.
c8 = gen_cycle(8)
r = radius(c8)
print("\nC8 radius", r.value, "|L|", len(r.L), "sweeps", r.report.sweeps)

# The diameter certificate covers V with balls B[x, diam - e(x)].
d = diameter(p5, variant="basic")
print("\nP5 diameter", d.value, "U", d.U)

# All eccentricities at once: the star needs its center and two leaves.
star = gen_star(4)
a = all_eccentricities(star)
print("\nstar eccentricities", a.ecc.tolist(), "L", a.L, "U", a.U)
assert np.array_equal(a.ecc, [1, 2, 2, 2, 2])
print(verify_bundle(star, a.bundle).summary())
