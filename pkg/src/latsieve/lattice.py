"""Special-q lattice construction and exact reduction in dimension <= 3.

The reduction is an all-integer LLL (Gram-Schmidt data carried as
integers with explicit denominators), so 60-bit construction entries
never see floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

Vec3 = tuple[int, int, int]


class SingularBasis(Exception):
    """Basis columns are linearly dependent."""


class NotSublattice(Exception):
    """Coordinate transform came out non-integral: inconsistent inputs."""


@dataclass(frozen=True)
class Basis3:
    """3x3 integer matrix whose columns span a lattice."""

    cols: tuple[Vec3, Vec3, Vec3]

    def det(self) -> int:
        (a, d, g), (b, e, h), (c, f, i) = self.cols
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    def mul_vec(self, v) -> Vec3:
        c0, c1, c2 = self.cols
        x, y, z = v
        return (
            c0[0] * x + c1[0] * y + c2[0] * z,
            c0[1] * x + c1[1] * y + c2[1] * z,
            c0[2] * x + c1[2] * y + c2[2] * z,
        )

    def adjugate_rows(self):
        """Rows of adj(M) with M = column matrix, so adj(M) @ x = det * M^-1 x."""
        (a, d, g), (b, e, h), (c, f, i) = self.cols
        return (
            (e * i - f * h, -(b * i - c * h), b * f - c * e),
            (-(d * i - f * g), a * i - c * g, -(a * f - c * d)),
            (d * h - e * g, -(a * h - b * g), a * e - b * d),
        )


@dataclass(frozen=True)
class SpecialQ:
    """A prime q with a chosen root r of the side-0 polynomial mod q."""

    q: int
    r: int


def special_q_basis(q: int, r: int) -> Basis3:
    """Columns (q,0,0), (-r,1,0), (0,-r,1); every column v has
    v0 + v1*r + v2*r^2 = 0 mod q, so the lattice is exactly the triples
    whose element is divisible by the special-q ideal."""
    if q < 2 or not 0 <= r < q:
        raise ValueError("need q >= 2 and r in [0, q)")
    return Basis3(((q, 0, 0), (-r, 1, 0), (0, -r, 1)))


def pq_basis(m: int, t: int) -> Basis3:
    """Same shape with composite modulus m and root t of f mod m."""
    if m < 2 or not 0 <= t < m:
        raise ValueError("need m >= 2 and t in [0, m)")
    return Basis3(((m, 0, 0), (-t, 1, 0), (0, -t, 1)))


# ---------------------------------------------------------------------------
# all-integer LLL

_DELTA_NUM, _DELTA_DEN = 99, 100  # Lovász delta = 0.99


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _lll_columns(cols, delta_num=_DELTA_NUM, delta_den=_DELTA_DEN):
    """de Weger-style integral LLL on a list of column vectors."""
    b = [list(c) for c in cols]
    n = len(b)
    d = [1] * (n + 1)  # d[i] = Gram determinant of b[0..i-1]
    lam = [[0] * n for _ in range(n)]

    def gso_row(i):
        for j in range(i + 1):
            u = _dot(b[i], b[j])
            for k in range(j):
                u = (d[k + 1] * u - lam[i][k] * lam[j][k]) // d[k]
            if j < i:
                lam[i][j] = u
            else:
                d[i + 1] = u

    for i in range(n):
        gso_row(i)
        if d[i + 1] == 0:
            raise SingularBasis("columns are linearly dependent")

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            for t in range(len(b[k])):
                b[k][t] -= q * b[l][t]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    k = 1
    while k < n:
        red(k, k - 1)
        if delta_den * (d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2) < delta_num * d[k] ** 2:
            b[k], b[k - 1] = b[k - 1], b[k]
            for j in range(k - 1):
                lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
            lam_ = lam[k][k - 1]
            bk = (d[k - 1] * d[k + 1] + lam_ * lam_) // d[k]
            for i in range(k + 1, n):
                t = lam[i][k]
                lam[i][k] = (d[k + 1] * lam[i][k - 1] - lam_ * t) // d[k]
                lam[i][k - 1] = (bk * t + lam_ * lam[i][k]) // d[k + 1]
            d[k] = bk
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b


def _column_sort_key(col):
    # ties by length broken on reversed absolute coordinates, so that
    # axis-aligned frames keep the z-like vector last
    return (_dot(col, col), tuple(abs(c) for c in reversed(col)))


def _sign_normalize(col):
    for c in col:
        if c != 0:
            return col if c > 0 else [-x for x in col]
    return col


def lll_reduce(B: Basis3) -> Basis3:
    """LLL-reduced basis of the same lattice, delta = 0.99.

    Columns come back sorted by non-decreasing length with the first
    nonzero entry of each made positive, so reduced bases are canonical
    and test outputs stable.
    """
    if B.det() == 0:
        raise SingularBasis("det = 0")
    cols = _lll_columns(B.cols)
    cols.sort(key=_column_sort_key)
    cols = [_sign_normalize(c) for c in cols]
    return Basis3(tuple(tuple(c) for c in cols))


def lll_reduce_2d(u, v):
    """Integral LLL for a pair of integer vectors (any length)."""
    a, b = _lll_columns([list(u), list(v)])
    pair = sorted([a, b], key=_column_sort_key)
    return tuple(pair[0]), tuple(pair[1])


def sublattice_coords(Lq_red: Basis3, Lpq_red: Basis3) -> Basis3:
    """L' = Lq_red^-1 * Lpq_red, computed exactly via the adjugate.

    Integral by construction whenever lattice(Lpq_red) really is a
    sublattice of lattice(Lq_red); anything else raises NotSublattice.
    """
    det = Lq_red.det()
    if det == 0:
        raise SingularBasis("det = 0")
    adj = Lq_red.adjugate_rows()
    out = []
    for col in Lpq_red.cols:
        new = []
        for row in adj:
            num = row[0] * col[0] + row[1] * col[1] + row[2] * col[2]
            q, rem = divmod(num, det)
            if rem:
                raise NotSublattice("transform entry is not integral")
            new.append(q)
        out.append(tuple(new))
    return Basis3(tuple(out))


def to_abc(Lq_red: Basis3, ijk) -> Vec3:
    """Map sieve coordinates (i,j,k) to the element triple (a,b,c)."""
    return Lq_red.mul_vec(ijk)
