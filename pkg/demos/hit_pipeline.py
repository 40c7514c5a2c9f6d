"""One special-q, hit by hit: sieve both sides, sort and scan the packed
(key, log p) lists, and show the score histogram plus the survivors.

Also round-trips the binary hit-dump format used for debugging.
"""

import tempfile

import numpy as np

from latsieve import (
    Poly,
    SpecialQ,
    build_factor_base,
    decode_keys,
    dump_hits,
    lll_reduce,
    load_hits,
    region_from_bits,
    roots_mod_p,
    sieve_side,
    sort_and_scan,
    special_q_basis,
    to_abc,
)

f0 = Poly.parse("4097,1,0,0,0,0,1")
f1 = Poly.parse("15,16,0,0,0,0,16")
region = region_from_bits(4, 4, 4)

q = 1031
r = roots_mod_p(f0, q)[0]
sq = SpecialQ(q, r)
L = lll_reduce(special_q_basis(q, r))
print(f"special-q ({q}, {r}), reduced basis columns {L.cols}")

fb0 = build_factor_base(f0, 1 << 8)
fb1 = build_factor_base(f1, 1 << 8)
hits0, s0 = sieve_side(L, fb0, sq, region, skip_below=8)
hits1, s1 = sieve_side(L, fb1, sq, region, skip_below=8)
print(f"side 0: {len(hits0)} hits from {s0.lattices} prime lattices, "
      f"{s0.planes} planes")
print(f"side 1: {len(hits1)} hits from {s1.lattices} prime lattices, "
      f"{s1.planes} planes")

with tempfile.NamedTemporaryFile(suffix=".hits") as tmp:
    keys, logs = hits0.arrays()
    dump_hits(tmp.name, keys, logs)
    back_keys, back_logs = load_hits(tmp.name)
    assert (back_keys == keys).all() and (back_logs == logs).all()
    print(f"hit dump round-trip: {len(keys)} records x 5 bytes ok")

k0, sc0 = sort_and_scan(hits0, 0)
print("\nside-0 score histogram (cells x total log):")
for score in range(0, int(sc0.max()) + 1, 4):
    n = int(((sc0 >= score) & (sc0 < score + 4)).sum())
    if n:
        print(f"  [{score:2d},{score + 4:2d}): {'#' * min(60, max(1, n // 8))} {n}")

threshold = (6, 6)
k0, sc0 = sort_and_scan(hits0, threshold[0])
k1, sc1 = sort_and_scan(hits1, threshold[1])
common, i0, i1 = np.intersect1d(k0, k1, assume_unique=True, return_indices=True)
print(f"\nthreshold {threshold}: {len(k0)} side-0 survivors, "
      f"{len(k1)} side-1, {len(common)} in both")
cells = decode_keys(common[:5], region)
for cell, a, b in zip(cells.tolist(), sc0[i0[:5]], sc1[i1[:5]]):
    abc = to_abc(L, cell)
    print(f"  cell {tuple(cell)} -> (a,b,c)={abc} scores=({a},{b})")
