import math
import random
import struct

import numpy as np
import pytest

from latsieve.arith import Poly, norm_abc, primes_upto, roots_mod_p, round_log2
from latsieve.engine import (
    FactorBaseEntry,
    HitList,
    InvalidRoot,
    OutOfRegion,
    build_factor_base,
    decode_key,
    decode_keys,
    dump_hits,
    encode_key,
    encode_keys,
    load_hits,
    sieve_side,
    sieve_special_q,
    sort_and_scan,
)
from latsieve.lattice import SpecialQ, lll_reduce, special_q_basis, to_abc
from latsieve.region import Region, region_from_bits
from latsieve.smooth import trial_divide


def dense_scan_oracle(keys, logs, threshold):
    """Direct dense-array accumulator over keys present in the hit list."""
    if len(keys) == 0:
        return np.empty(0, np.uint32), np.empty(0, np.int64)
    size = int(keys.max()) + 1
    sums = np.zeros(size, dtype=np.int64)
    np.add.at(sums, keys, logs.astype(np.int64))
    present = np.zeros(size, dtype=bool)
    present[keys] = True
    sel = np.flatnonzero(present & (sums >= threshold))
    return sel.astype(np.uint32), sums[sel]


class TestFactorBase:
    def test_x2_plus_1(self):
        fb = build_factor_base(Poly([1, 0, 1]), 10)
        assert [(e.p, e.r) for e in fb] == [(2, 1), (5, 2), (5, 3)]

    def test_small_bound(self):
        fb = build_factor_base(Poly([1, 0, 1]), 3)
        assert [(e.p, e.r) for e in fb] == [(2, 1)]

    def test_log_weights(self):
        fb = build_factor_base(Poly([1, 0, 1]), 10)
        assert all(e.logp == round_log2(e.p) for e in fb)

    def test_lc_multiples_skipped(self):
        fb = build_factor_base(Poly([1, 1, 7]), 20)
        assert all(e.p != 7 for e in fb)

    def test_root_counts_match_scan(self, toy_pair):
        f0, _ = toy_pair
        fb = build_factor_base(f0, 1 << 12)
        by_p = {}
        for e in fb:
            by_p.setdefault(e.p, []).append(e.r)
        rng = random.Random(30)
        for p in rng.sample(primes_upto(1 << 12), 40):
            scan = [x for x in range(p) if f0(x) % p == 0]
            assert by_p.get(p, []) == scan


class TestKeys:
    def test_corner_values(self):
        region = region_from_bits(5, 6, 7)
        assert encode_key((-32, -64, 0), region) == 0
        top = (31, 63, 127)
        assert encode_key(top, region) == (1 << (5 + 6 + 7 + 2)) - 1

    def test_out_of_region(self):
        region = region_from_bits(4, 4, 4)
        with pytest.raises(OutOfRegion):
            encode_key((16, 0, 0), region)
        with pytest.raises(OutOfRegion):
            decode_key(1 << 14, region)

    def test_roundtrip_random(self):
        region = region_from_bits(5, 6, 7)
        rng = np.random.default_rng(31)
        lo = np.array(region.lo)
        pts = rng.integers(0, region.spans(), size=(100_000, 3)) + lo
        keys = encode_keys(pts, region)
        assert (decode_keys(keys, region) == pts).all()
        for row in pts[:50]:
            t = tuple(int(v) for v in row)
            assert decode_key(encode_key(t, region), region) == t


class TestSortAndScan:
    def test_empty(self):
        k, s = sort_and_scan([], 0)
        assert len(k) == 0 and len(s) == 0

    def test_hand_checked(self):
        k, s = sort_and_scan([(7, 10), (3, 5), (7, 20)], 25)
        assert k.tolist() == [7] and s.tolist() == [30]

    def test_threshold_zero_reports_present_keys_only(self):
        k, s = sort_and_scan([(5, 1), (9, 2)], 0)
        assert k.tolist() == [5, 9]

    def test_against_dense_oracle(self):
        rng = np.random.default_rng(32)
        for n in (1, 100, 10_000, 200_000):
            keys = rng.integers(0, 1 << 14, size=n).astype(np.uint32)
            logs = rng.integers(1, 13, size=n).astype(np.uint8)
            dense_sums = dense_scan_oracle(keys, logs, 0)[1]
            med = int(np.median(dense_sums))
            top = int(dense_sums.max())
            for th in (0, 1, med, top + 1):
                got_k, got_s = sort_and_scan((keys, logs), th)
                exp_k, exp_s = dense_scan_oracle(keys, logs, th)
                assert np.array_equal(got_k, exp_k)
                assert np.array_equal(got_s, exp_s)


class TestHitListAndDump:
    def test_append_only_growth(self):
        h = HitList()
        sizes = []
        for i in range(5):
            h.append_run(np.arange(i * 3, i * 3 + 3, dtype=np.uint32), 7 + i)
            sizes.append(len(h))
        assert sizes == sorted(sizes) and len(set(sizes)) == 5
        keys, logs = h.arrays()
        assert keys.tolist() == list(range(15))
        assert logs.tolist() == [7, 7, 7, 8, 8, 8, 9, 9, 9, 10, 10, 10, 11, 11, 11]

    def test_dump_layout(self, tmp_path):
        path = tmp_path / "hits.bin"
        keys = np.array([1, 0x01020304, 7], dtype=np.uint32)
        logs = np.array([9, 8, 7], dtype=np.uint8)
        dump_hits(path, keys, logs)
        raw = path.read_bytes()
        assert len(raw) == 8 + 3 * 5
        assert struct.unpack("<Q", raw[:8])[0] == 3
        assert raw[8:13] == struct.pack("<IB", 1, 9)
        assert raw[13:18] == struct.pack("<IB", 0x01020304, 8)
        back_k, back_l = load_hits(path)
        assert back_k.tolist() == keys.tolist()
        assert back_l.tolist() == logs.tolist()

    def test_truncated_dump_detected(self, tmp_path):
        path = tmp_path / "hits.bin"
        dump_hits(path, np.arange(4, dtype=np.uint32), np.ones(4, dtype=np.uint8))
        data = path.read_bytes()[:-3]
        path.write_bytes(data)
        with pytest.raises(ValueError):
            load_hits(path)


@pytest.fixture
def tiny_sq(toy_pair):
    f0, _ = toy_pair
    q = 1031
    r = roots_mod_p(f0, q)[0]
    return SpecialQ(q, r), lll_reduce(special_q_basis(q, r))


class TestSieveSide:
    def test_empty_factor_base(self, tiny_sq):
        sq, L = tiny_sq
        hits, stats = sieve_side(L, [], sq, region_from_bits(4, 4, 4))
        assert len(hits) == 0 and stats.lattices == 0

    def test_pointless_entry(self, tiny_sq, toy_pair):
        # a prime large enough that its sublattice misses the tiny region
        f0, _ = toy_pair
        sq, L = tiny_sq
        region = Region((-2, -2, 1), (2, 2, 2))  # excludes the origin plane
        p = 3989
        r = roots_mod_p(f0, p)[0]
        fb = [FactorBaseEntry(p, r, round_log2(p))]
        hits, _ = sieve_side(L, fb, sq, region, skip_below=2)
        assert len(hits) == 0

    def test_divisibility_contract(self, tiny_sq, toy_pair):
        f0, f1 = toy_pair
        sq, L = tiny_sq
        region = region_from_bits(4, 4, 4)
        fb0 = build_factor_base(f0, 1 << 8)
        fb1 = build_factor_base(f1, 1 << 8)
        for f_side, fb, q_on_side0 in ((f0, fb0, True), (f1, fb1, False)):
            trace = []
            sieve_side(L, fb, sq, region, skip_below=8, trace=trace)
            assert trace, "expected some hits"
            for p, r, keys in trace:
                cells = decode_keys(keys, region)
                for cell in cells[:5].tolist():
                    a, b, c = to_abc(L, cell)
                    if (a, b, c) == (0, 0, 0):
                        continue
                    n = norm_abc(f_side, a, b, c)
                    assert n % p == 0
                    if q_on_side0:
                        assert n % (p * sq.q) == 0


class TestSieveSpecialQ:
    def test_empty_bases_empty_result(self, tiny_sq, toy_pair):
        f0, f1 = toy_pair
        sq, _ = tiny_sq
        out = sieve_special_q(sq, f0, f1, [], [], region_from_bits(4, 4, 4), (0, 0))
        assert out == []

    def test_invalid_root(self, toy_pair):
        f0, f1 = toy_pair
        bad = SpecialQ(1031, 5)
        if f0(5) % 1031 == 0:  # safety: must really be a non-root
            pytest.skip("unexpected root")
        with pytest.raises(InvalidRoot):
            sieve_special_q(bad, f0, f1, [], [], region_from_bits(4, 4, 4), (0, 0))

    def test_planted_cell_is_sole_survivor(self, tiny_sq, toy_pair):
        f0, f1 = toy_pair
        sq, L = tiny_sq
        region = region_from_bits(4, 4, 4)
        primes = primes_upto(4096)
        cell = (3, -2, 5)
        a, b, c = to_abc(L, cell)
        g = Poly([a, b, c])

        def planted_entry(f, n):
            fac, _ = trial_divide(n, primes)
            for p in sorted(set(fac), reverse=True):
                if not 37 <= p <= 4096 or p == sq.q:
                    continue
                shared = set(roots_mod_p(f, p)) & set(roots_mod_p(g, p))
                if shared:
                    return FactorBaseEntry(p, min(shared), round_log2(p))
            raise AssertionError("no plantable prime")

        e0 = planted_entry(f0, norm_abc(f0, a, b, c))
        e1 = planted_entry(f1, norm_abc(f1, a, b, c))
        cands = sieve_special_q(
            sq, f0, f1, [e0], [e1], region, (e0.logp, e1.logp), skip_below=2
        )
        assert [cand.ijk for cand in cands] == [cell]
        assert cands[0].score0 == e0.logp and cands[0].score1 == e1.logp

    def test_candidates_sorted_and_coprime(self, tiny_sq, toy_pair):
        f0, f1 = toy_pair
        sq, L = tiny_sq
        region = region_from_bits(4, 4, 4)
        fb0 = build_factor_base(f0, 1 << 8)
        fb1 = build_factor_base(f1, 1 << 8)
        cands = sieve_special_q(sq, f0, f1, fb0, fb1, region, (6, 6), skip_below=8)
        assert cands, "tiny config should produce candidates"
        keys = [encode_key(cand.ijk, region) for cand in cands]
        assert keys == sorted(keys)
        for cand in cands:
            i, j, k = cand.ijk
            assert math.gcd(math.gcd(i, j), k) == 1
