"""Smoothness testing: trial division, p-1 / rho cofactorization, and
relation assembly.

All subroutines are deterministic (fixed seeds, fixed bases) so a sieve
run reproduces byte-identically.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache

from . import arith
from .arith import Poly
from .lattice import Basis3, to_abc

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin; the fixed base set is deterministic below 2^64 and a
    strong probable-prime test above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def trial_divide(n: int, fb_primes) -> tuple[list[int], int]:
    """Divide out every listed prime to full multiplicity.

    Returns (factors ascending, cofactor) with product(factors) * cofactor
    == n exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    factors = []
    for p in fb_primes:
        if p * p > n:
            break
        if n % p == 0:
            while n % p == 0:
                factors.append(p)
                n //= p
            if n == 1:
                break
    if n > 1 and fb_primes and n <= fb_primes[-1]:
        # loop stopped at sqrt(n); the prime remainder may itself be listed
        i = bisect.bisect_left(fb_primes, n)
        if i < len(fb_primes) and fb_primes[i] == n:
            factors.append(n)
            n = 1
    return factors, n


@lru_cache(maxsize=8)
def _pm1_exponent(b1: int) -> int:
    e = 1
    for p in arith.primes_upto(b1):
        pe = p
        while pe * p <= b1:
            pe *= p
        e *= pe
    return e


def pollard_pm1(n: int, b1: int) -> int | None:
    """Stage-1 Pollard p-1 with base 2 and exponent lcm of prime powers
    up to b1; returns a nontrivial factor or None.

    When the end gcd collapses to n (every factor has b1-smooth 2-order)
    the exponent is replayed prime by prime to split the factors apart.
    """
    a = pow(2, _pm1_exponent(b1), n)
    g = math.gcd(a - 1, n)
    if 1 < g < n:
        return g
    if g == 1:
        return None
    a = 2
    for p in arith.primes_upto(b1):
        e = 1
        while p ** (e + 1) <= b1:
            e += 1
        for _ in range(e):
            a = pow(a, p, n)
            g = math.gcd(a - 1, n)
            if g == n:
                return None
            if g > 1:
                return g
    return None


_RHO_SEEDS = ((2, 1), (3, 3), (5, 5), (7, 11))
_RHO_BUDGET = 1 << 20


def pollard_rho(n: int) -> int | None:
    """Brent-cycle rho with a fixed seed schedule and bounded iteration
    budget; returns a nontrivial factor or None."""
    if n % 2 == 0:
        return 2
    for y0, c in _RHO_SEEDS:
        y, r, q = y0, 1, 1
        g = 1
        steps = 0
        x = ys = y
        while g == 1 and steps < _RHO_BUDGET:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                m = min(128, r - k)
                for _ in range(m):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
                steps += m
            r *= 2
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def _perfect_power_root(n: int) -> tuple[int, int] | None:
    """(b, e) with b^e == n and e >= 2, or None."""
    for e in range(2, n.bit_length()):
        if 1 << e > n:
            break
        b = math.isqrt(n) if e == 2 else round(n ** (1.0 / e))
        for cand in (b - 1, b, b + 1):
            if cand >= 2 and cand**e == n:
                return cand, e
    return None


def cofactorize(cofactor: int, lpb_bits: int, nlp_max: int, b1: int = 2048) -> list[int] | None:
    """Full factorization of a trial-divided cofactor, or None.

    Succeeds iff every prime fits below 2^lpb_bits and at most nlp_max
    primes remain.  Anything above 2^(lpb_bits*nlp_max) aborts early.
    """
    if cofactor < 1:
        raise ValueError("cofactor must be >= 1")
    if cofactor == 1:
        return []
    if cofactor > 1 << (lpb_bits * nlp_max):
        return None
    bound = 1 << lpb_bits
    primes = []
    stack = [cofactor]
    while stack:
        n = stack.pop()
        if n == 1:
            continue
        if is_prime(n):
            if n > bound:
                return None
            primes.append(n)
            if len(primes) > nlp_max:
                return None
            continue
        if n < bound:
            # composite below the prime bound still needs splitting,
            # but can never exceed the prime count by less than 2
            if len(primes) + 2 > nlp_max:
                return None
        pw = _perfect_power_root(n)
        if pw is not None:
            b, e = pw
            stack.extend([b] * e)
            continue
        f = pollard_pm1(n, b1)
        if f is None:
            f = pollard_rho(n)
        if f is None:
            return None
        stack.append(f)
        stack.append(n // f)
    if len(primes) > nlp_max:
        return None
    return sorted(primes)


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class Relation:
    """A coprime sign-normalized triple with both norms fully factored."""

    a: int
    b: int
    c: int
    factors0: tuple[int, ...]
    factors1: tuple[int, ...]

    def line(self) -> str:
        """`a,b,c:hex,...:hex,...` with primes ascending in lowercase hex."""
        f0 = ",".join(format(p, "x") for p in self.factors0)
        f1 = ",".join(format(p, "x") for p in self.factors1)
        return f"{self.a},{self.b},{self.c}:{f0}:{f1}"

    @classmethod
    def from_line(cls, line: str) -> "Relation":
        abc, f0, f1 = line.split(":")
        a, b, c = (int(t) for t in abc.split(","))
        fs0 = tuple(int(t, 16) for t in f0.split(",")) if f0 else ()
        fs1 = tuple(int(t, 16) for t in f1.split(",")) if f1 else ()
        return cls(a, b, c, fs0, fs1)


def sign_normalize(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Flip signs so the first nonzero of (c, b, a) is positive."""
    for lead in (c, b, a):
        if lead:
            return (a, b, c) if lead > 0 else (-a, -b, -c)
    return a, b, c


def build_relation(
    ijk,
    Lq_red: Basis3,
    f0: Poly,
    f1: Poly,
    primes0: list[int],
    primes1: list[int],
    lpb_bits: tuple[int, int],
    nlp_max: int,
    pm1_b1: int = 2048,
) -> Relation | None:
    """Turn a candidate cell into a relation, or None.

    Maps to (a,b,c), rejects non-coprime triples, sign-normalizes, then
    requires both norms to factor completely inside the large-prime
    bounds.  Cheapest rejections run first.
    """
    a, b, c = to_abc(Lq_red, ijk)
    if math.gcd(math.gcd(a, b), c) != 1:
        return None
    a, b, c = sign_normalize(a, b, c)
    n0 = arith.norm_abc(f0, a, b, c)
    if n0 == 0:
        return None
    fac0, cof0 = trial_divide(n0, primes0)
    large0 = cofactorize(cof0, lpb_bits[0], nlp_max, pm1_b1)
    if large0 is None:
        return None
    n1 = arith.norm_abc(f1, a, b, c)
    if n1 == 0:
        return None
    fac1, cof1 = trial_divide(n1, primes1)
    large1 = cofactorize(cof1, lpb_bits[1], nlp_max, pm1_b1)
    if large1 is None:
        return None
    return Relation(
        a,
        b,
        c,
        tuple(sorted(fac0 + large0)),
        tuple(sorted(fac1 + large1)),
    )
