"""Per-special-q sieving with list-then-sort hit accumulation.

A hit is a packed 32-bit cell key plus a one-byte log weight; hits are
appended to a strictly growing list, sorted by key, and runs of equal
keys are summed.  Cells whose per-side sums clear the thresholds become
candidates.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import arith
from .arith import Poly, crt_combine, roots_mod_p
from .lattice import Basis3, SpecialQ, lll_reduce, pq_basis, special_q_basis, sublattice_coords
from .enumerate import enumerate_ground, enumerate_zplanes
from .region import Region


class OutOfRegion(Exception):
    """Cell coordinates outside the sieve region cannot be keyed."""


class InvalidRoot(Exception):
    """The special-q root does not satisfy f0(r) = 0 mod q."""


@dataclass(frozen=True)
class FactorBaseEntry:
    p: int
    r: int
    logp: int


def build_factor_base(f: Poly, bound: int) -> list[FactorBaseEntry]:
    """One entry per root of f mod p for every prime p <= bound not
    dividing lc(f); sorted by (p, r)."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    out = []
    for p in arith.primes_upto(bound):
        if f.lc % p == 0:
            continue
        logp = arith.round_log2(p)
        for r in roots_mod_p(f, p):
            out.append(FactorBaseEntry(p, r, logp))
    return out


# ---------------------------------------------------------------------------
# cell keys


def encode_key(ijk, region: Region) -> int:
    """Pack an in-region cell into one word: x fastest, then y, then z."""
    if not region.contains(*ijk):
        raise OutOfRegion(f"{ijk} outside the sieve region")
    sx, sy, _ = region.spans()
    return ((ijk[2] - region.lo[2]) * sy + (ijk[1] - region.lo[1])) * sx + (
        ijk[0] - region.lo[0]
    )


def decode_key(key: int, region: Region):
    sx, sy, _ = region.spans()
    if not 0 <= key < region.cell_count():
        raise OutOfRegion(f"key {key} out of range")
    rest, x = divmod(key, sx)
    z, y = divmod(rest, sy)
    return (x + region.lo[0], y + region.lo[1], z + region.lo[2])


def encode_keys(points: np.ndarray, region: Region) -> np.ndarray:
    """Vectorized encode_key for an (N,3) array of in-region cells."""
    sx, sy, _ = region.spans()
    lo = region.lo
    return (
        ((points[:, 2] - lo[2]) * sy + (points[:, 1] - lo[1])) * sx
        + (points[:, 0] - lo[0])
    ).astype(np.uint32)


def decode_keys(keys: np.ndarray, region: Region) -> np.ndarray:
    sx, sy, _ = region.spans()
    k = keys.astype(np.int64)
    rest, x = np.divmod(k, sx)
    z, y = np.divmod(rest, sy)
    out = np.stack([x + region.lo[0], y + region.lo[1], z + region.lo[2]], axis=1)
    return out


# ---------------------------------------------------------------------------
# hit lists


class HitList:
    """Append-only (key, logp) store; the backing chunks only ever grow,
    so writes stay strictly sequential."""

    def __init__(self):
        self._keys = []
        self._logs = []
        self._written = 0

    def append_run(self, keys: np.ndarray, logp: int):
        if len(keys) == 0:
            return
        self._keys.append(keys.astype(np.uint32, copy=False))
        self._logs.append(np.full(len(keys), logp, dtype=np.uint8))
        new = self._written + len(keys)
        assert new > self._written  # write index is strictly monotone
        self._written = new

    def __len__(self):
        return self._written

    def arrays(self):
        if not self._keys:
            return np.empty(0, np.uint32), np.empty(0, np.uint8)
        return np.concatenate(self._keys), np.concatenate(self._logs)


_HIT_HEADER = struct.Struct("<Q")
_HIT_DTYPE = np.dtype([("key", "<u4"), ("log", "u1")])


def dump_hits(path, keys: np.ndarray, logs: np.ndarray):
    """Debug dump: 8-byte little-endian count, then 5-byte records of
    4-byte key + 1-byte log."""
    rec = np.empty(len(keys), dtype=_HIT_DTYPE)
    rec["key"] = keys
    rec["log"] = logs
    with open(path, "wb") as fh:
        fh.write(_HIT_HEADER.pack(len(keys)))
        fh.write(rec.tobytes())


def load_hits(path):
    with open(path, "rb") as fh:
        (count,) = _HIT_HEADER.unpack(fh.read(_HIT_HEADER.size))
        rec = np.frombuffer(fh.read(count * _HIT_DTYPE.itemsize), dtype=_HIT_DTYPE)
    if len(rec) != count:
        raise ValueError("truncated hit dump")
    return rec["key"].copy(), rec["log"].copy()


# ---------------------------------------------------------------------------
# sort + scan


def _as_arrays(hits):
    if isinstance(hits, HitList):
        return hits.arrays()
    if isinstance(hits, tuple):
        return hits
    if len(hits) == 0:
        return np.empty(0, np.uint32), np.empty(0, np.uint8)
    arr = np.asarray(hits, dtype=np.int64)
    return arr[:, 0].astype(np.uint32), arr[:, 1].astype(np.uint8)


def sort_and_scan(hits, threshold: int):
    """Stable-sort hits by key, sum log weights over runs of equal keys,
    and keep keys whose sum reaches the threshold.

    Returns (keys, scores) arrays sorted by key.  Only keys present in
    the hit list are reported, whatever the threshold.
    """
    keys, logs = _as_arrays(hits)
    if len(keys) == 0:
        return np.empty(0, np.uint32), np.empty(0, np.int64)
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    sl = logs[order].astype(np.int64)
    starts = np.concatenate([[0], np.flatnonzero(np.diff(sk)) + 1])
    sums = np.add.reduceat(sl, starts)
    uk = sk[starts]
    mask = sums >= threshold
    return uk[mask], sums[mask]


# ---------------------------------------------------------------------------
# per-side sieve


@dataclass
class SideStats:
    hits: int = 0
    points: int = 0
    planes: int = 0
    lattices: int = 0


def sieve_side(
    Lq_red: Basis3,
    fb: list[FactorBaseEntry],
    sq: SpecialQ,
    region: Region,
    skip_below: int = 32,
    enumerator: str = "ground",
    trace=None,
) -> tuple[HitList, SideStats]:
    """Accumulate hits for every factor-base entry against one special-q.

    For each (p, r) the root is lifted by CRT to the modulus p*q, the
    p*q-lattice is reduced and rewritten in special-q coordinates, and
    its in-region points are appended as hits carrying log p.  Primes
    below skip_below (dense lattices) and p == q are skipped.
    """
    hits = HitList()
    stats = SideStats()
    q, rq = sq.q, sq.r
    for ent in fb:
        p = ent.p
        if p < skip_below or p == q:
            continue
        t = crt_combine(q, rq, p, ent.r)
        sub = sublattice_coords(Lq_red, lll_reduce(pq_basis(p * q, t)))
        if enumerator == "ground":
            pts, gstats = enumerate_ground(sub, region)
            stats.planes += gstats.planes_entered
        else:
            pts, levels = enumerate_zplanes(sub, region)
            stats.planes += levels
        stats.lattices += 1
        stats.points += len(pts)
        if len(pts):
            keys = encode_keys(pts, region)
            hits.append_run(keys, ent.logp)
            stats.hits += len(keys)
            if trace is not None:
                trace.append((p, ent.r, keys))
    return hits, stats


@dataclass(frozen=True)
class Candidate:
    ijk: tuple[int, int, int]
    score0: int
    score1: int


@dataclass
class SieveJobStats:
    q: int = 0
    r: int = 0
    hits0: int = 0
    hits1: int = 0
    candidates: int = 0


def sieve_special_q(
    sq: SpecialQ,
    f0: Poly,
    f1: Poly,
    fb0: list[FactorBaseEntry],
    fb1: list[FactorBaseEntry],
    region: Region,
    thresholds: tuple[int, int],
    skip_below: int = 32,
    stats: SieveJobStats | None = None,
) -> list[Candidate]:
    """Sieve both sides over one special-q and intersect the survivors.

    Side 0 lifts roots of f0, side 1 roots of f1; both happen inside the
    special-q coordinate frame, so a side-1 hit means p divides the
    side-1 norm of a cell whose side-0 norm q already divides.  Cells
    with gcd(i,j,k) > 1 are scaled copies of interior cells and are
    dropped here.
    """
    if arith.poly_eval_mod(f0, sq.r, sq.q) != 0:
        raise InvalidRoot(f"f0({sq.r}) != 0 mod {sq.q}")
    Lq_red = lll_reduce(special_q_basis(sq.q, sq.r))
    hits0, s0 = sieve_side(Lq_red, fb0, sq, region, skip_below)
    hits1, s1 = sieve_side(Lq_red, fb1, sq, region, skip_below)
    k0, sc0 = sort_and_scan(hits0, thresholds[0])
    k1, sc1 = sort_and_scan(hits1, thresholds[1])
    common, i0, i1 = np.intersect1d(k0, k1, assume_unique=True, return_indices=True)
    if stats is not None:
        stats.q, stats.r = sq.q, sq.r
        stats.hits0, stats.hits1 = len(hits0), len(hits1)
    if len(common) == 0:
        return []
    pts = decode_keys(common, region)
    g = np.gcd.reduce(np.abs(pts), axis=1)
    keep = g == 1
    out = [
        Candidate((int(x), int(y), int(z)), int(a), int(b))
        for (x, y, z), a, b in zip(
            pts[keep].tolist(), sc0[i0[keep]].tolist(), sc1[i1[keep]].tolist()
        )
    ]
    if stats is not None:
        stats.candidates = len(out)
    return out
