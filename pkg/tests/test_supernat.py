import random

import pytest

from bratteli import INF, ONE, SupernaturalNumber, is_prime


def sn(*pairs):
    return SupernaturalNumber(dict(pairs))


class TestInfinity:
    def test_orders_above_every_int(self):
        assert INF > 10**18
        assert INF >= INF
        assert not (INF < 5)
        assert 3 < INF

    def test_absorbs_addition(self):
        assert INF + 7 is INF
        assert 7 + INF is INF
        assert INF + INF is INF


def test_is_prime_small_values():
    primes = [p for p in range(30) if is_prime(p)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


class TestConstruction:
    def test_rejects_composite_base(self):
        with pytest.raises(ValueError):
            sn((4, 1))

    def test_rejects_bad_exponent(self):
        with pytest.raises(ValueError):
            sn((2, 0))
        with pytest.raises(ValueError):
            sn((2, -1))

    def test_from_natural_one_is_empty(self):
        assert SupernaturalNumber.from_natural(1) == ONE
        assert ONE.factors == ()

    def test_from_natural_twelve(self):
        assert SupernaturalNumber.from_natural(12) == sn((2, 2), (3, 1))

    def test_from_natural_primorial(self):
        # 2310 = 2*3*5*7*11
        got = SupernaturalNumber.from_natural(2310)
        assert got == sn((2, 1), (3, 1), (5, 1), (7, 1), (11, 1))

    def test_from_natural_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            SupernaturalNumber.from_natural(0)


class TestMultiply:
    def test_infinity_absorbs(self):
        assert sn((2, INF)) * sn((2, 1), (3, 1)) == sn((2, INF), (3, 1))

    def test_one_is_identity(self):
        x = sn((2, 3), (7, INF))
        assert ONE * x == x
        assert x * ONE == x

    def test_mixed_infinite_exponents(self):
        assert sn((2, 3), (5, INF)) * sn((2, INF), (5, 2)) == sn((2, INF), (5, INF))

    def test_homomorphism_from_naturals(self):
        rng = random.Random(11)
        for _ in range(200):
            a = rng.randint(1, 10**6)
            b = rng.randint(1, 10**6)
            lhs = SupernaturalNumber.from_natural(a * b)
            rhs = SupernaturalNumber.from_natural(a) * SupernaturalNumber.from_natural(b)
            assert lhs == rhs

    def test_commutative_associative(self):
        rng = random.Random(12)
        pool = [2, 3, 5, 7]
        def draw():
            fac = {}
            for p in rng.sample(pool, rng.randint(0, 3)):
                fac[p] = rng.choice([1, 2, 3, INF])
            return SupernaturalNumber(fac)
        for _ in range(300):
            x, y, z = draw(), draw(), draw()
            assert x * y == y * x
            assert (x * y) * z == x * (y * z)


class TestDivides:
    def test_finite_into_infinite(self):
        assert sn((2, 1)).divides(sn((2, INF)))

    def test_missing_prime(self):
        assert not sn((3, 1)).divides(sn((2, INF)))

    def test_reflexive(self):
        x = sn((2, 2), (3, 1))
        assert x.divides(x)

    def test_partial_order_on_random_triples(self):
        rng = random.Random(13)
        pool = [2, 3, 5]
        def draw():
            fac = {}
            for p in rng.sample(pool, rng.randint(0, 3)):
                fac[p] = rng.choice([1, 2, INF])
            return SupernaturalNumber(fac)
        for _ in range(1000):
            x, y, z = draw(), draw(), draw()
            assert x.divides(x)
            if x.divides(y) and y.divides(x):
                assert x == y
            if x.divides(y) and y.divides(z):
                assert x.divides(z)


class TestAssociatedSequence:
    def test_two_to_infinity(self):
        assert sn((2, INF)).associated_sequence(3) == (2, 4, 8)

    def test_one_gives_constant_ones(self):
        assert ONE.associated_sequence(3) == (1, 1, 1)

    def test_six(self):
        assert SupernaturalNumber.from_natural(6).associated_sequence(2) == (2, 6)

    def test_capped_exponents(self):
        # 2^inf*3^2*5: exponents of 3 and 5 saturate at 2 and 1
        n = SupernaturalNumber.parse("2^inf*3^2*5")
        assert n.associated_sequence(4) == (2, 36, 360, 720)

    def test_divisibility_chain(self):
        rng = random.Random(14)
        pool = [2, 3, 5, 7, 11]
        for _ in range(200):
            fac = {}
            for p in rng.sample(pool, rng.randint(0, 4)):
                fac[p] = rng.choice([1, 2, 3, INF])
            n = SupernaturalNumber(fac)
            length = rng.randint(1, 7)
            chain = n.associated_sequence(length)
            assert len(chain) == length
            for a, b in zip(chain, chain[1:]):
                assert b % a == 0
                assert b // a >= 1


class TestText:
    def test_parse_round_trip(self):
        for text in ("1", "2", "2^inf", "2^inf*3^2*5", "3^4*7^inf"):
            n = SupernaturalNumber.parse(text)
            assert str(n) == text
            assert SupernaturalNumber.parse(str(n)) == n

    def test_parse_rejects_garbage(self):
        for text in ("", "4", "2^0", "2*2", "2^", "x", "2^-1", "6^inf"):
            with pytest.raises(ValueError):
                SupernaturalNumber.parse(text)

    def test_finite_round_trip_to_int(self):
        n = SupernaturalNumber.from_natural(360)
        assert n.is_finite()
        assert n.to_int() == 360
        assert not sn((2, INF)).is_finite()
