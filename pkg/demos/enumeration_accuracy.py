"""Accuracy audit of the ground-plane enumerator on random lattices.

Soundness must be perfect (no false points); completeness may drop the
occasional outlier row on very skewed lattices, so this script reports
the aggregate recovery rate against the brute-force oracle.
"""

import numpy as np

from latsieve import Basis3, enumerate_bruteforce, enumerate_ground, enumerate_zplanes, region_from_bits

rng = np.random.default_rng(42)
region = region_from_bits(6, 6, 6)

lattices = 0
oracle_points = 0
found_points = 0
false_points = 0
planes_g = 0
planes_z = 0

while lattices < 200:
    cols = rng.integers(-1024, 1025, size=(3, 3))
    B = Basis3(tuple(tuple(int(x) for x in c) for c in cols))
    if abs(B.det()) < 256:
        continue
    lattices += 1
    pts, stats = enumerate_ground(B, region)
    zpts, levels = enumerate_zplanes(B, region)
    oracle = set(map(tuple, enumerate_bruteforce(B, region).tolist()))
    got = set(map(tuple, pts.tolist()))
    false_points += len(got - oracle)
    found_points += len(got & oracle)
    oracle_points += len(oracle)
    planes_g += stats.planes_entered
    planes_z += levels
    assert set(map(tuple, zpts.tolist())) == oracle, "z-sweep must be complete"

print(f"lattices:            {lattices}")
print(f"oracle points:       {oracle_points}")
print(f"ground-plane found:  {found_points} "
      f"({100 * found_points / oracle_points:.3f}% recovery)")
print(f"false points:        {false_points}")
print(f"planes entered:      {planes_g} (vs {planes_z} z-levels inspected)")
