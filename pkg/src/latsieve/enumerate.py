"""Lattice point enumeration inside the sieve cuboid.

Three enumerators over the same contract (all integer points of a
lattice inside a Region):

* ground-plane sweep: reduce the basis, take the shortest two vectors
  as a plane frame, enter each plane translate through an integer
  feasibility search, and walk rows.  Fast, may miss rare outlier rows
  by design (bounded by the two-empty-row stopping rule).
* z-plane sweep: classic level-by-level baseline, complete.
* brute force: membership test of every cell, the test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Basis3, SingularBasis, lll_reduce, lll_reduce_2d
from .region import Region


class DegenerateNormal(Exception):
    """v1 x v2 is orthogonal to v3: not a basis."""


class RegionTooLarge(Exception):
    """Brute-force oracle refuses regions above its cell-count cap."""


_BRUTE_CELL_CAP = 1 << 24

# Dropping a v2-direction after this many consecutive integer-empty rows
# bounds the skew-lattice outlier misses without scanning whole strips.
_EMPTY_ROW_QUOTA = 2

_BIG = 1 << 62


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _ceil_div(a, b):  # b > 0
    return -((-a) // b)


def plane_range(v1, v2, v3, region: Region) -> tuple[int, int]:
    """Integer range of k for which the plane span(v1,v2) + k*v3 meets
    the region geometrically (half-open faces excluded exactly).

    The plane is the locus <n,x> = k*d with n = v1 x v2, d = <n,v3>.
    """
    n = _cross(v1, v2)
    d = _dot(n, v3)
    if d == 0:
        raise DegenerateNormal("<v1 x v2, v3> = 0")
    m_lo = m_hi = 0
    lo_att = hi_att = True
    for ni, lo, hi, closed in zip(n, region.lo, region.hi, region.closed):
        if ni > 0:
            m_lo += ni * lo
            m_hi += ni * hi
            hi_att = hi_att and closed
        elif ni < 0:
            m_lo += ni * hi
            m_hi += ni * lo
            lo_att = lo_att and closed
    if d < 0:
        d, m_lo, m_hi, lo_att, hi_att = -d, -m_hi, -m_lo, hi_att, lo_att
    k_min = _ceil_div(m_lo, d)
    if not lo_att and k_min * d == m_lo:
        k_min += 1
    k_max = m_hi // d
    if not hi_att and k_max * d == m_hi:
        k_max -= 1
    return k_min, k_max


# ---------------------------------------------------------------------------
# integer feasibility on a plane


def _fm_bounds(ineqs):
    """Shared one-variable bounds from rows (A, C) meaning A*t <= C."""
    t_lo, t_hi = -_BIG, _BIG
    for A, C in ineqs:
        if A > 0:
            t_hi = min(t_hi, C // A)
        elif A < 0:
            t_lo = max(t_lo, _ceil_div(-C, -A))
        elif C < 0:
            return 1, 0  # 0 <= C violated: empty
    return t_lo, t_hi


def _eliminate(rows, keep):
    """Fourier-Motzkin: project rows (alpha, beta, gamma) = alpha*r + beta*s
    <= gamma onto one variable. keep=0 projects onto r, keep=1 onto s."""
    out = []
    pos, neg = [], []
    for row in rows:
        elim = row[1 - keep]
        if elim == 0:
            out.append((row[keep], row[2]))
        elif elim > 0:
            pos.append(row)
        else:
            neg.append(row)
    for ap, bp, cp in pos:
        for an, bn, cn in neg:
            if keep == 0:
                out.append((ap * (-bn) + an * bp, cp * (-bn) + cn * bp))
            else:
                out.append((bp * (-an) + bn * ap, cp * (-an) + cn * ap))
    return out


def _box_rows(v1, v2, base, region):
    """The 6 closed integer inequalities lo <= base + r*v1 + s*v2 <= hi_cell
    as rows (alpha, beta, gamma)."""
    rows = []
    hc = region.hi_cell
    for i in range(3):
        rows.append((v1[i], v2[i], hc[i] - base[i]))
        rows.append((-v1[i], -v2[i], base[i] - region.lo[i]))
    return rows


def ilp_feasible_point(v1, v2, R, region: Region):
    """Some lattice point R + r*v1 + s*v2 inside the region, or None.

    Bounds on r come from the LP relaxation of the face inequalities;
    integer r values in that window are scanned and for each one the
    three s-strips are intersected exactly.  None means no integer
    point exists on this plane (not an error).
    """
    rows = _box_rows(v1, v2, R, region)
    r_lo, r_hi = _fm_bounds(_eliminate(rows, keep=0))
    hc = region.hi_cell
    # scan outward from r = 0 so a feasible R itself comes back unchanged
    for r in sorted(range(r_lo, r_hi + 1), key=abs):
        s_lo, s_hi = -_BIG, _BIG
        for i in range(3):
            pos = R[i] + r * v1[i]
            b = v2[i]
            lo_i, hi_i = region.lo[i] - pos, hc[i] - pos
            if b == 0:
                if lo_i > 0 or hi_i < 0:
                    s_lo = 1
                    s_hi = 0
                    break
            elif b > 0:
                s_lo = max(s_lo, _ceil_div(lo_i, b))
                s_hi = min(s_hi, hi_i // b)
            else:
                s_lo = max(s_lo, _ceil_div(-hi_i, -b))
                s_hi = min(s_hi, (-lo_i) // (-b))
        if s_lo <= s_hi:
            s = min(max(0, s_lo), s_hi)
            p0 = (R[0] + r * v1[0] + s * v2[0], R[1] + r * v1[1] + s * v2[1], R[2] + r * v1[2] + s * v2[2])
            return p0, (r, s)
    return None


# ---------------------------------------------------------------------------
# row sweeps


def _plane_rows(v1, v2, p0, region: Region, quota):
    """Rows of in-region integer points on the plane p0 + r*v1 + s*v2.

    Returns (s_vals, r_lo, r_hi) int64 arrays, one entry per row that
    holds at least one point, s ascending.  Each row's integer interval
    of r is computed exactly, so a reported-empty row genuinely has no
    point.  With a quota, sweeping away from p0's row stops once that
    many consecutive rows come up empty (the skewed-lattice outlier
    tolerance); quota=None keeps the whole geometric strip, which makes
    the sweep complete.
    """
    rows = _box_rows(v1, v2, p0, region)
    s_lo, s_hi = _fm_bounds(_eliminate(rows, keep=1))
    if s_lo > s_hi:
        return (np.empty(0, np.int64),) * 3
    if s_hi - s_lo > (1 << 24):
        raise RegionTooLarge("plane strip too wide to materialize")

    s_vals = np.arange(s_lo, s_hi + 1, dtype=np.int64)
    r_lo = np.full(s_vals.shape, -_BIG, dtype=np.int64)
    r_hi = np.full(s_vals.shape, _BIG, dtype=np.int64)
    ok = np.ones(s_vals.shape, dtype=bool)
    hc = region.hi_cell
    for i in range(3):
        base = p0[i] + s_vals * v2[i]
        lo_i = region.lo[i] - base
        hi_i = hc[i] - base
        a = v1[i]
        if a == 0:
            ok &= (lo_i <= 0) & (hi_i >= 0)
        elif a > 0:
            np.maximum(r_lo, -((-lo_i) // a), out=r_lo)
            np.minimum(r_hi, hi_i // a, out=r_hi)
        else:
            np.maximum(r_lo, -((-(-hi_i)) // (-a)), out=r_lo)
            np.minimum(r_hi, (-lo_i) // (-a), out=r_hi)
    nonempty = ok & (r_lo <= r_hi)

    if quota is not None:
        idx0 = -s_lo  # index of s = 0; p0 is in the region so it is in range
        flags = nonempty.tolist()
        cut_hi = len(flags) - 1
        misses = 0
        for j in range(idx0, len(flags)):
            misses = 0 if flags[j] else misses + 1
            if misses >= quota:
                cut_hi = j
                break
        cut_lo = 0
        misses = 0
        for j in range(idx0 - 1, -1, -1):
            misses = 0 if flags[j] else misses + 1
            if misses >= quota:
                cut_lo = j
                break
        keep = np.zeros(s_vals.shape, dtype=bool)
        keep[cut_lo : cut_hi + 1] = True
        nonempty &= keep

    return s_vals[nonempty], r_lo[nonempty], r_hi[nonempty]


def _expand_rows(bases, step, r_lo, r_hi):
    """Materialize rows base + r*step for r in [r_lo, r_hi], row order kept."""
    counts = r_hi - r_lo + 1
    total = int(counts.sum())
    if total == 0:
        return np.empty((0, 3), dtype=np.int64)
    row_idx = np.repeat(np.arange(len(counts)), counts)
    starts = np.cumsum(counts) - counts
    r = np.arange(total, dtype=np.int64) - np.repeat(starts, counts) + np.repeat(r_lo, counts)
    return bases[row_idx] + r[:, None] * np.asarray(step, dtype=np.int64)


def enumerate_plane(v1, v2, p0, region: Region) -> np.ndarray:
    """All reachable in-region points of the plane through p0, as an
    (N,3) array ordered by increasing s then increasing r."""
    if not region.contains(*p0):
        raise ValueError("p0 must lie inside the region")
    s_vals, r_lo, r_hi = _plane_rows(v1, v2, p0, region, _EMPTY_ROW_QUOTA)
    bases = np.asarray(p0, dtype=np.int64) + s_vals[:, None] * np.asarray(v2, dtype=np.int64)
    return _expand_rows(bases, v1, r_lo, r_hi)


@dataclass
class GroundStats:
    planes_geometric: int = 0
    planes_entered: int = 0


@dataclass(frozen=True)
class PlaneFrame:
    """Successive-minima frame plus the translate range meeting the region."""

    v1: tuple[int, int, int]
    v2: tuple[int, int, int]
    v3: tuple[int, int, int]
    k_min: int
    k_max: int


def reduced_frame(Lp: Basis3, region: Region):
    """(v1, v2, v3) successive-minima frame with v3 oriented so that
    increasing plane index sweeps the region bottom-to-top."""
    B = lll_reduce(Lp)
    v1, v2, v3 = B.cols
    if _dot(_cross(v1, v2), v3) < 0:
        v3 = (-v3[0], -v3[1], -v3[2])
    return v1, v2, v3


def plane_frame(Lp: Basis3, region: Region) -> PlaneFrame:
    v1, v2, v3 = reduced_frame(Lp, region)
    k_min, k_max = plane_range(v1, v2, v3, region)
    return PlaneFrame(v1, v2, v3, k_min, k_max)


def enumerate_ground(Lp: Basis3, region: Region):
    """Ground-plane enumeration: returns (points, GroundStats).

    Every returned point is in the lattice and the region; completeness
    can miss rare outliers, which the acceptance suite bounds in
    aggregate.
    """
    frame = plane_frame(Lp, region)
    v1, v2, v3 = frame.v1, frame.v2, frame.v3
    k_min, k_max = frame.k_min, frame.k_max
    stats = GroundStats(planes_geometric=max(0, k_max - k_min + 1))
    all_bases = []
    all_rlo = []
    all_rhi = []
    for k in range(k_min, k_max + 1):
        R = (k * v3[0], k * v3[1], k * v3[2])
        hit = ilp_feasible_point(v1, v2, R, region)
        if hit is None:
            continue
        stats.planes_entered += 1
        p0 = hit[0]
        s_vals, r_lo, r_hi = _plane_rows(v1, v2, p0, region, _EMPTY_ROW_QUOTA)
        bases = np.asarray(p0, dtype=np.int64) + s_vals[:, None] * np.asarray(v2, dtype=np.int64)
        all_bases.append(bases)
        all_rlo.append(r_lo)
        all_rhi.append(r_hi)
    if not all_bases:
        return np.empty((0, 3), dtype=np.int64), stats
    pts = _expand_rows(
        np.concatenate(all_bases),
        v1,
        np.concatenate(all_rlo),
        np.concatenate(all_rhi),
    )
    return pts, stats


def enumerate_lattice(Lp: Basis3, region: Region) -> np.ndarray:
    """Points of the lattice inside the region via the ground-plane sweep."""
    return enumerate_ground(Lp, region)[0]


# ---------------------------------------------------------------------------
# baselines


def enumerate_bruteforce(Lp: Basis3, region: Region) -> np.ndarray:
    """Membership-test every cell of the region; the reference oracle."""
    if region.cell_count() > _BRUTE_CELL_CAP:
        raise RegionTooLarge(f"more than {_BRUTE_CELL_CAP} cells")
    det = Lp.det()
    if det == 0:
        raise SingularBasis("det = 0")
    adj = Lp.adjugate_rows()
    hc = region.hi_cell
    axes = [np.arange(region.lo[i], hc[i] + 1, dtype=np.int64) for i in range(3)]
    # int64 is safe while |adj| * |coord| stays far from 2^63
    max_term = sum(
        max(abs(adj[r][i]) for r in range(3)) * max(abs(int(axes[i][0])), abs(int(axes[i][-1])))
        for i in range(3)
    )
    if max_term >= 1 << 60:
        pts = [
            (int(x), int(y), int(z))
            for x in axes[0]
            for y in axes[1]
            for z in axes[2]
            if all(
                (adj[r][0] * int(x) + adj[r][1] * int(y) + adj[r][2] * int(z)) % det == 0
                for r in range(3)
            )
        ]
        return np.array(pts, dtype=np.int64).reshape(-1, 3)
    X = axes[0][:, None, None]
    Y = axes[1][None, :, None]
    Z = axes[2][None, None, :]
    mask = np.ones((len(axes[0]), len(axes[1]), len(axes[2])), dtype=bool)
    for r in range(3):
        mask &= (adj[r][0] * X + adj[r][1] * Y + adj[r][2] * Z) % det == 0
    idx = np.argwhere(mask)  # C order: sorted by (x, y, z)
    pts = idx + np.array([region.lo], dtype=np.int64)
    return pts.astype(np.int64)


def _egcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _z_slice_frame(Lp: Basis3):
    """Kernel basis and particular solution for the z-component equation.

    Returns (g, u0, C1, C2): lattice points with z-component z exist iff
    g | z and are X0 + m*C1 + n*C2 with X0 = Lp @ (u0 * (z//g)).
    """
    rz = (Lp.cols[0][2], Lp.cols[1][2], Lp.cols[2][2])
    a, b, c = rz
    g1, s1, t1 = _egcd(a, b)
    if g1 == 0:
        # a = b = 0: kernel is spanned by the first two unit coefficient vectors
        g, sb, tb = _egcd(0, c)
        u0 = (0, 0, tb)
        w1, w2 = (1, 0, 0), (0, 1, 0)
    else:
        g, s2, t2 = _egcd(g1, c)
        u0 = (s2 * s1, s2 * t1, t2)
        w1 = (-(b // g1), a // g1, 0)
        w2 = (-(s1 * (c // g)), -(t1 * (c // g)), g1 // g)
    C1 = Lp.mul_vec(w1)
    C2 = Lp.mul_vec(w2)
    return abs(g), u0 if g > 0 else (-u0[0], -u0[1], -u0[2]), C1, C2


def _round_div(num, den):
    if den < 0:
        num, den = -num, -den
    return (2 * num + den) // (2 * den)


def _size_reduce_against(X0, C1, C2, region: Region):
    """Translate X0 by the slice lattice toward the region center to keep
    coordinates small; exact 2x2 solve in the xy-plane."""
    det2 = C1[0] * C2[1] - C1[1] * C2[0]
    cx = (region.lo[0] + region.hi_cell[0]) // 2
    cy = (region.lo[1] + region.hi_cell[1]) // 2
    dx, dy = X0[0] - cx, X0[1] - cy
    m = _round_div(C2[1] * dx - C2[0] * dy, det2)
    n = _round_div(-C1[1] * dx + C1[0] * dy, det2)
    return (
        X0[0] - m * C1[0] - n * C2[0],
        X0[1] - m * C1[1] - n * C2[1],
        X0[2] - m * C1[2] - n * C2[2],
    )


def enumerate_zplanes(Lp: Basis3, region: Region):
    """Level-by-level baseline: complete, returns (points, levels_inspected)."""
    if Lp.det() == 0:
        raise SingularBasis("det = 0")
    g, u0, C1, C2 = _z_slice_frame(Lp)
    C1, C2 = lll_reduce_2d(C1, C2)
    z_lo, z_hi = region.lo[2], region.hi_cell[2]
    plane_count = z_hi - z_lo + 1
    all_bases, all_rlo, all_rhi = [], [], []
    for z in range(z_lo, z_hi + 1):
        if z % g:
            continue
        t = z // g
        X0 = Lp.mul_vec((u0[0] * t, u0[1] * t, u0[2] * t))
        X0 = _size_reduce_against(X0, C1, C2, region)
        s_vals, r_lo, r_hi = _plane_rows(C1, C2, X0, region, quota=None)
        if len(s_vals) == 0:
            continue
        bases = np.asarray(X0, dtype=np.int64) + s_vals[:, None] * np.asarray(C2, dtype=np.int64)
        all_bases.append(bases)
        all_rlo.append(r_lo)
        all_rhi.append(r_hi)
    if not all_bases:
        return np.empty((0, 3), dtype=np.int64), plane_count
    pts = _expand_rows(
        np.concatenate(all_bases),
        C1,
        np.concatenate(all_rlo),
        np.concatenate(all_rhi),
    )
    return pts, plane_count
