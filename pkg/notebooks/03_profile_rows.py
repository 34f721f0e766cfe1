"""
Table-style measurements on synthetic graphs
============================================

``profile`` reports certificate sizes (R for radius, D for diameter) next to
the structural quantities that explain them: the diameter to radius ratio,
how many nodes sit close to a center, and with ``full`` the greedy cover
sizes and antipode counts.
"""

import sys

from eccert.analysis import CSV_HEADER, profile
from eccert.generators import gen_bowtie, gen_grid, gen_powerlaw, gen_udg, gen_weighted_directed_grid

graphs = [
    ("bowtie-20-20", gen_bowtie(20, 20)),
    ("grid61-10", gen_grid(61, 0.1, seed=0)),
    ("grid41-wd", gen_weighted_directed_grid(41, seed=0)),
    ("pwlaw2.5", gen_powerlaw(3000, 2.5, seed=0)),
    ("udg10", gen_udg(3000, 10, seed=0)),
]

print(",".join(CSV_HEADER))
for name, g in graphs:
    # full columns are quadratic; they are affordable at these sizes
    row = profile(g, full=g.n <= 4000, name=name)
    sys.stdout.write(row.csv(header=False))
