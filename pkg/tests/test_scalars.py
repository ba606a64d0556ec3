from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmbmw.scalars import (AlgebraParams, Admissibility, ModInt, PRIMES,
                           PrimeField, PrimeUnlucky, RationalField,
                           ScalarError, check_admissible, q_number,
                           random_rational, sample_q)

P = PRIMES[0]

nonzero = st.integers(min_value=-10 ** 6, max_value=10 ** 6).filter(bool)
anyint = st.integers(min_value=-10 ** 6, max_value=10 ** 6)


def test_primes_are_prime_and_bounded():
    # products of two residues must fit in a signed 64-bit word
    for p in PRIMES:
        assert 2 ** 31 < p and p * p < 2 ** 63
        for d in range(2, 66000):
            assert p % d != 0


@given(a=anyint, b=nonzero, c=anyint, d=nonzero)
@settings(max_examples=60, deadline=None)
def test_modint_is_ring_homomorphism(a, b, c, d):
    # the reduction Q -> GF(p) respects +, *, / wherever it is defined
    f = PrimeField(P)
    x = Fraction(a, b)
    y = Fraction(c, d)
    mx = f.from_ratio(a, b)
    my = f.from_ratio(c, d)

    def img(q):
        return f.from_ratio(q.numerator, q.denominator)

    assert mx + my == img(x + y)
    assert mx - my == img(x - y)
    assert mx * my == img(x * y)
    if y:
        assert mx / my == img(x / y)


def test_modint_guards():
    one = ModInt(1, P)
    with pytest.raises(PrimeUnlucky):
        one / ModInt(0, P)
    with pytest.raises(PrimeUnlucky):
        ModInt(0, P) ** (-1)
    with pytest.raises(ScalarError):
        one + ModInt(1, PRIMES[1])
    with pytest.raises(AttributeError):
        one.r = 5
    assert ModInt(-1, P).r == P - 1
    assert (ModInt(3, P) ** (-2)) * ModInt(9, P) == 1


@given(a=anyint, b=nonzero)
@settings(max_examples=40, deadline=None)
def test_serialize_round_trip(a, b):
    for field in (RationalField(), PrimeField(P)):
        x = field.from_ratio(a, b)
        assert field.parse(field.serialize(x)) == x


def test_parse_guards():
    f = RationalField()
    with pytest.raises(ScalarError):
        f.from_ratio(7, 0)
    with pytest.raises(ScalarError):
        PrimeField(P).from_ratio(1, P)
    with pytest.raises(ScalarError):
        PrimeField(P).parse("1 mod 17")


def test_q_number_oracle():
    # i_q = q^(i-1) + q^(i-3) + ... + q^(1-i)
    f = RationalField()
    params = AlgebraParams(f, Fraction(7, 5), Fraction(25, 49))
    for i in range(7):
        want = sum((Fraction(7, 5)) ** (i - 1 - 2 * k) for k in range(i))
        assert q_number(i, params) == want
    assert q_number(0, params) == 0
    assert q_number(1, params) == 1


def test_params_exclusions():
    f = RationalField()
    q = Fraction(7, 5)
    for bad_q in (0, 1, -1):
        with pytest.raises(ScalarError):
            AlgebraParams(f, Fraction(bad_q), Fraction(1, 2))
    for bad_mu in (Fraction(0), q, Fraction(-1) / q):
        with pytest.raises(ScalarError):
            AlgebraParams(f, q, bad_mu)
    # mu = -q is a legitimate parameter point
    AlgebraParams(f, q, -q)


def test_admissibility_constraints():
    f = RationalField()
    q = Fraction(7, 5)
    good = AlgebraParams(f, q, q ** (-2))
    assert check_admissible(good, 4)
    a = check_admissible(AlgebraParams(f, q, -q ** (-3)), 3, "antisym")
    assert not a and a.j == 3 and "-q^(-3)" in a.constraint
    # the same mu is fine on the symmetrizer side
    assert check_admissible(AlgebraParams(f, q, -q ** (-3)), 3, "sym")
    s = check_admissible(AlgebraParams(f, q, q ** 3), 3, "sym")
    assert not s and s.j == 3 and "q^(3)" in s.constraint
    with pytest.raises(ScalarError):
        check_admissible(good, 3, "sideways")
    assert bool(Admissibility(True))


def test_sampling_is_seeded_and_admissible():
    import random

    f = RationalField()
    p1 = sample_q(random.Random(11), f, -2, 1, 4)
    p2 = sample_q(random.Random(11), f, -2, 1, 4)
    assert p1.q == p2.q and p1.mu == p2.mu
    assert p1.mu == p1.q ** (-2)
    assert check_admissible(p1, 4)
    x = random_rational(random.Random(3), f)
    assert x > 0 and x != 1
