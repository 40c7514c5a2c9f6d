"""Exact integer and polynomial arithmetic.

Everything here works on plain Python integers, so no operation can
silently overflow.  Polynomials are dense coefficient lists, constant
term first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class LeadingCoeffVanishes(Exception):
    """p divides the leading coefficient; caller should skip this prime."""


class NotCoprime(Exception):
    """CRT moduli share a factor."""


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Dense univariate polynomial over Z, coefficients constant-first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Parse a comma-separated decimal coefficient list, constant first."""
        parts = [p.strip() for p in text.split(",")]
        return cls(int(p) for p in parts if p != "")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)


@dataclass(frozen=True)
class PrimeRoot:
    """A residue r with f(r) = 0 mod p for the owning side's polynomial."""

    p: int
    r: int


def poly_eval_mod(f: Poly, x: int, m: int) -> int:
    """f(x) mod m by Horner's rule, result in [0, m)."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    acc = 0
    x = x % m
    for c in reversed(f.coeffs):
        acc = (acc * x + c) % m
    return acc


# --- GF(p)[x] helpers (internal, constant-first tuples) --------------------


def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod_poly(f: Poly, p: int):
    return _ptrim([c % p for c in f.coeffs])


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _prem(a, b, p):
    """Remainder of a by b in GF(p)[x]; b nonzero."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv = pow(lb, -1, p)
    while len(a) - 1 >= db and a:
        q = (a[-1] * inv) % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - q * bi) % p
        _ptrim(a)
    return a


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _prem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _ppow_mod(base, e, f, p):
    """base^e mod (f, p)."""
    result = [1]
    base = _prem(base, f, p)
    while e:
        if e & 1:
            result = _prem(_pmul(result, base, p), f, p)
        base = _prem(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _roots_of_split_product(g, p, salt=1):
    """Roots of g, a squarefree product of distinct linear factors mod p.

    Equal-degree splitting with a deterministic shift sequence, so runs
    are reproducible.
    """
    deg = len(g) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [(-g[0] * pow(g[1], -1, p)) % p]
    if g[0] == 0:
        rest = _ptrim(list(g[1:]))
        return [0] + _roots_of_split_product(rest, p, salt)
    # (x+a)^((p-1)/2) - 1 splits the roots into quadratic residues of x+a
    a = salt
    while True:
        w = _ppow_mod([a, 1], (p - 1) // 2, g, p)
        w = list(w)
        if w:
            w[0] = (w[0] - 1) % p
        else:
            w = [p - 1]
        _ptrim(w)
        h = _pgcd(g, w, p)
        if 0 < len(h) - 1 < deg:
            other = _pgcd(g, _pdiv_exact(g, h, p), p)
            # h * other = g up to scalars; recurse on both halves
            return _roots_of_split_product(h, p, a + 1) + _roots_of_split_product(
                other, p, a + 1
            )
        a += 1


def _pdiv_exact(a, b, p):
    """Exact quotient a/b in GF(p)[x]."""
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    db, lb = len(b) - 1, b[-1]
    inv = pow(lb, -1, p)
    while len(a) - 1 >= db and a:
        q = (a[-1] * inv) % p
        shift = len(a) - 1 - db
        out[shift] = q
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - q * bi) % p
        _ptrim(a)
    return _ptrim(out)


_BRUTE_ROOT_LIMIT = 1 << 16


def roots_mod_p(f: Poly, p: int) -> list[int]:
    """All distinct r in [0,p) with f(r) = 0 mod p, ascending.

    Small p is handled by a vectorized scan; larger p goes through
    gcd(f, x^p - x) followed by equal-degree splitting.

    Raises LeadingCoeffVanishes when p divides lc(f); projective roots
    are deliberately unsupported and such primes are skipped upstream.
    """
    if f.degree < 0:
        raise ValueError("zero polynomial has every residue as a root")
    if f.lc % p == 0:
        raise LeadingCoeffVanishes(f"p={p} divides leading coefficient")
    fp = _pmod_poly(f, p)
    if len(fp) == 1:
        return []
    if p < _BRUTE_ROOT_LIMIT:
        xs = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for c in reversed(fp):
            acc = (acc * xs + c) % p
        return [int(r) for r in np.flatnonzero(acc == 0)]
    # x^p mod f, then strip everything that is not a linear factor
    xp = _ppow_mod([0, 1], p, fp, p)
    xp_minus_x = list(xp)
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _pgcd(fp, _ptrim(xp_minus_x), p)
    return sorted(_roots_of_split_product(g, p))


def crt_combine(q: int, r: int, p: int, rho: int) -> int:
    """The unique t in [0, pq) with t = r mod q and t = rho mod p."""
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    t = r + q * (((rho - r) * pow(q, -1, p)) % p)
    return t % (p * q)


# ---------------------------------------------------------------------------
# resultants


def _bareiss_det(m) -> int:
    """Fraction-free determinant of a square integer matrix (destructive)."""
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k = m[i], m[k]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def resultant(f: Poly, g: Poly) -> int:
    """Res(f, g) as the Sylvester determinant, exact."""
    m, n = f.degree, g.degree
    if m < 0 and n < 0:
        raise ValueError("resultant of two zero polynomials")
    if m < 0 or n < 0:
        return 0
    if m == 0 and n == 0:
        return 1
    if m == 0:
        return f.lc**n
    if n == 0:
        return g.lc**m
    size = m + n
    fd = list(reversed(f.coeffs))  # descending degree
    gd = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (m - 1 - i))
    assert all(len(r) == size for r in rows)
    return _bareiss_det(rows)


def norm_abc(f: Poly, a: int, b: int, c: int) -> int:
    """|Res(f, a + b*x + c*x^2)|; the norm of the sieved element."""
    if a == 0 and b == 0 and c == 0:
        raise ValueError("norm of the zero element")
    return abs(resultant(f, Poly([a, b, c])))


# ---------------------------------------------------------------------------
# primes


def primes_upto(n: int) -> list[int]:
    """All primes <= n, ascending."""
    if n < 2:
        return []
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(mask)]


def round_log2(n: int) -> int:
    """round(log2 n) computed exactly (no floating point)."""
    if n <= 0:
        raise ValueError("positive integer required")
    e = n.bit_length() - 1
    # fractional part >= 0.5  iff  n^2 >= 2^(2e+1)
    return e + (1 if n * n >= 1 << (2 * e + 1) else 0)
