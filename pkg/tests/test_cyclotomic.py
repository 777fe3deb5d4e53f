import random
from fractions import Fraction as Q

import pytest

from shintani.cyclotomic import (
    Cyc,
    ConductorCapError,
    conductor_cap,
    cyc_arith,
    cyclotomic_polynomial,
    euler_phi,
    root_of_unity,
)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_half_turn_is_minus_one():
    assert root_of_unity(Q(1, 2)) == Cyc.rational(-1)


def test_vanishing_cyclotomic_sum():
    s = Cyc.one() + root_of_unity(Q(1, 3)) + root_of_unity(Q(2, 3))
    assert s.is_zero()


def test_exponent_addition():
    assert root_of_unity(Q(1, 6)) * root_of_unity(Q(1, 6)) == root_of_unity(Q(1, 3))


def test_root_of_unity_reduction_mod_one():
    assert root_of_unity(Q(0)) == Cyc.one()
    assert root_of_unity(Q(5, 3)) == root_of_unity(Q(2, 3))
    i = root_of_unity(Q(1, 4))
    assert i * i == Cyc.rational(-1)


def test_root_of_unity_power_law():
    rng = random.Random(5)
    for _ in range(20):
        q = Q(rng.randint(-10, 10), rng.randint(1, 12))
        for k in range(1, 13):
            assert root_of_unity(q) ** k == root_of_unity(k * q)


def test_product_law():
    rng = random.Random(9)
    for _ in range(30):
        q1 = Q(rng.randint(-8, 8), rng.randint(1, 10))
        q2 = Q(rng.randint(-8, 8), rng.randint(1, 10))
        assert root_of_unity(q1) * root_of_unity(q2) == root_of_unity(q1 + q2)


def random_cyc(rng, max_conductor=24):
    n = rng.randint(1, max_conductor)
    phi = euler_phi(n)
    num = tuple(rng.randint(-5, 5) for _ in range(phi))
    return Cyc(n, num, rng.randint(1, 6))


def test_inverse_of_random_nonzero():
    rng = random.Random(23)
    count = 0
    while count < 100:
        a = random_cyc(rng)
        if a.is_zero():
            continue
        count += 1
        assert a * a.inv() == Cyc.one()


def test_conductor_raise_then_lower_identity():
    rng = random.Random(31)
    for _ in range(40):
        a = random_cyc(rng, max_conductor=12).reduced()
        m = a.n * rng.randint(1, 4)
        assert a.raised(m).reduced() == a


def test_equality_across_conductors():
    # zeta_3 written at conductor 6: zeta_6^2 = zeta_6 - 1
    a = root_of_unity(Q(1, 3))
    b = Cyc(6, (-1, 1), 1)
    assert a == b
    assert root_of_unity(Q(1, 2)).reduced().n == 1


def test_arithmetic_mixed_conductors():
    a = root_of_unity(Q(1, 4))
    b = root_of_unity(Q(1, 3))
    c = a * b
    assert c == root_of_unity(Q(7, 12))
    assert (a + b) - b == a


def test_add_mixed_denominators():
    # regression: common denominator must be the lcm
    assert Cyc.rational(Q(-1, 4)) + Cyc.rational(Q(1, 6)) == Cyc.rational(Q(-1, 12))
    rng = random.Random(41)
    for _ in range(30):
        x = Q(rng.randint(-9, 9), rng.randint(1, 12))
        y = Q(rng.randint(-9, 9), rng.randint(1, 12))
        assert Cyc.rational(x) + Cyc.rational(y) == Cyc.rational(x + y)
        z = root_of_unity(Q(1, 5))
        assert (z * x + z * y) == z * (x + y)


def test_scalar_ops():
    a = root_of_unity(Q(1, 5))
    assert a * Q(2, 3) * Q(3, 2) == a
    assert a + 0 == a
    assert (a - a).is_zero()


def test_inv_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Cyc.zero().inv()


def test_conductor_cap():
    with conductor_cap(10):
        with pytest.raises(ConductorCapError):
            root_of_unity(Q(1, 11))
        root_of_unity(Q(1, 10))
    # cap restored
    root_of_unity(Q(1, 36))


def test_cyc_arith_dispatch():
    a = root_of_unity(Q(1, 3))
    assert cyc_arith(a, a, "mul") == root_of_unity(Q(2, 3))
    assert cyc_arith(a, -a, "add").is_zero()
    assert cyc_arith(a, a, "inv") == root_of_unity(Q(-1, 3))


def test_json_roundtrip():
    a = Cyc(12, (1, -2, 0, 5), 6)
    assert Cyc.from_json(a.to_json()) == a
