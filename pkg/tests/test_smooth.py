import math
import random

import pytest

from latsieve.arith import Poly, norm_abc, primes_upto, roots_mod_p
from latsieve.lattice import lll_reduce, special_q_basis, to_abc
from latsieve.smooth import (
    Relation,
    build_relation,
    cofactorize,
    is_prime,
    pollard_pm1,
    pollard_rho,
    sign_normalize,
    trial_divide,
)


def next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


class TestIsPrime:
    def test_small(self):
        assert [n for n in range(2, 40) if is_prime(n)] == [
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37,
        ]

    def test_against_sieve(self):
        table = set(primes_upto(50_000))
        rng = random.Random(40)
        for _ in range(2000):
            n = rng.randrange(2, 50_000)
            assert is_prime(n) == (n in table)

    def test_known_64bit(self):
        assert is_prime((1 << 61) - 1)
        assert not is_prime((1 << 62) - 1)


class TestTrialDivide:
    def test_one(self):
        assert trial_divide(1, [2, 3, 5]) == ([], 1)

    def test_360(self):
        assert trial_divide(360, [2, 3, 5]) == ([2, 2, 2, 3, 3, 5], 1)

    def test_unlisted_prime_stays_in_cofactor(self):
        assert trial_divide(6, [2, 5]) == ([2], 3)

    def test_reconstruction_random(self):
        rng = random.Random(41)
        primes = primes_upto(4096)
        for _ in range(100):
            n = rng.randrange(1, 1 << 80)
            fac, cof = trial_divide(n, primes)
            prod = cof
            for p in fac:
                prod *= p
            assert prod == n
            assert fac == sorted(fac)
            assert all(cof % p for p in primes if p * p <= cof)


class TestPollardPm1:
    def test_finds_smooth_order_factor(self):
        # 13 - 1 = 12 is 12-smooth, 23 - 1 = 22 is not
        assert pollard_pm1(299, 12) == 13

    def test_both_factors_rough(self):
        # p-1 = 2*89, q-1 = 2*97: stage-1 with b1=20 sees neither
        assert pollard_pm1(179 * 389, 20) is None

    def test_divisor_contract(self):
        rng = random.Random(42)
        smalls = primes_upto(2000)
        for _ in range(300):
            p, q = rng.sample(smalls[10:], 2)
            n = p * q
            f = pollard_pm1(n, 64)
            if f is not None:
                assert 1 < f < n and n % f == 0


class TestPollardRho:
    def test_8051(self):
        assert pollard_rho(8051) in (83, 97)

    def test_divisor_contract(self):
        rng = random.Random(43)
        for _ in range(60):
            p = next_prime(rng.randrange(1 << 14, 1 << 15))
            q = next_prime(rng.randrange(1 << 14, 1 << 15))
            n = p * q
            f = pollard_rho(n)
            assert f is not None and 1 < f < n and n % f == 0

    def test_30bit_semiprimes(self):
        rng = random.Random(44)
        failures = 0
        for _ in range(100):
            p = next_prime(rng.randrange(1 << 29, 1 << 30))
            q = next_prime(rng.randrange(1 << 29, 1 << 30))
            f = pollard_rho(p * q)
            if f not in (p, q):
                failures += 1
        assert failures <= 1


class TestCofactorize:
    def test_trivial(self):
        assert cofactorize(1, 16, 2) == []

    def test_prime_above_bound(self):
        assert cofactorize(next_prime((1 << 16) + 1), 16, 2) is None

    def test_too_many_primes(self):
        ps = [65521, 65519, 65497]
        n = ps[0] * ps[1] * ps[2]
        assert cofactorize(n, 16, 2) is None
        assert sorted(cofactorize(n, 16, 3)) == sorted(ps)

    def test_early_abort(self):
        assert cofactorize(1 << 40, 16, 2) is None

    def test_prime_power(self):
        assert cofactorize(65521**2, 16, 2) == [65521, 65521]

    def test_roundtrip_random_products(self):
        rng = random.Random(45)
        for _ in range(150):
            k = rng.randrange(0, 3)
            ps = sorted(next_prime(rng.randrange(1 << 12, 1 << 16)) for _ in range(k))
            n = 1
            for p in ps:
                n *= p
            got = cofactorize(n, 16, 2)
            assert got == ps

    def test_never_returns_nondivisor(self):
        rng = random.Random(46)
        for _ in range(80):
            n = rng.randrange(2, 1 << 32)
            got = cofactorize(n, 16, 2)
            if got is not None:
                prod = 1
                for p in got:
                    prod *= p
                    assert is_prime(p)
                assert prod == n


class TestSignNormalize:
    def test_rules(self):
        assert sign_normalize(1, 2, -3) == (-1, -2, 3)
        assert sign_normalize(5, -4, 0) == (-5, 4, 0)
        assert sign_normalize(-7, 0, 0) == (7, 0, 0)
        assert sign_normalize(1, 2, 3) == (1, 2, 3)


class TestRelationFormat:
    def test_line_layout(self):
        rel = Relation(-3, 2, 1, (2, 11, 255), (7,))
        assert rel.line() == "-3,2,1:2,b,ff:7"

    def test_empty_sides(self):
        rel = Relation(1, 0, 0, (), ())
        assert rel.line() == "1,0,0::"
        assert Relation.from_line("1,0,0::") == rel

    def test_roundtrip(self):
        rel = Relation(12, -7, 3, (2, 2, 65521), (3, 199))
        assert Relation.from_line(rel.line()) == rel


class TestBuildRelation:
    @pytest.fixture
    def setting(self, toy_pair):
        f0, f1 = toy_pair
        q = 4099
        r = roots_mod_p(f0, q)[0]
        L = lll_reduce(special_q_basis(q, r))
        primes = primes_upto(1 << 12)
        return f0, f1, L, primes

    def test_gcd_filter(self, setting):
        f0, f1, L, primes = setting
        # find a cell whose (a,b,c) is non-coprime
        for i in range(-8, 8):
            for j in range(-8, 8):
                for k in range(0, 8):
                    a, b, c = to_abc(L, (i, j, k))
                    if (a, b, c) != (0, 0, 0) and math.gcd(math.gcd(a, b), c) > 1:
                        rel = build_relation(
                            (i, j, k), L, f0, f1, primes, primes, (16, 16), 3
                        )
                        assert rel is None
                        return
        pytest.skip("no non-coprime cell in window")

    def test_reconstruction_when_built(self, setting):
        f0, f1, L, primes = setting
        rng = random.Random(47)
        built = 0
        for _ in range(4000):
            ijk = (rng.randrange(-32, 32), rng.randrange(-32, 32), rng.randrange(32))
            rel = build_relation(ijk, L, f0, f1, primes, primes, (16, 16), 3)
            if rel is None:
                continue
            built += 1
            prod0 = math.prod(rel.factors0)
            prod1 = math.prod(rel.factors1)
            assert prod0 == norm_abc(f0, rel.a, rel.b, rel.c)
            assert prod1 == norm_abc(f1, rel.a, rel.b, rel.c)
            assert all(p <= 1 << 16 for p in rel.factors0 + rel.factors1)
            assert math.gcd(math.gcd(rel.a, rel.b), rel.c) == 1
            lead = next(x for x in (rel.c, rel.b, rel.a) if x)
            assert lead > 0
            if built >= 25:
                break
        assert built >= 5
