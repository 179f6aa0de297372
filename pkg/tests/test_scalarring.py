from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supchev.scalarring import (
    SQRT2,
    DualNumber,
    GrassmannElem,
    Scalar,
    dual_epsilon,
    format_grassmann,
    gr_exp_nilpotent,
    gr_inv,
    gr_mul,
    gr_power,
    parse_grassmann,
)

N = 4


def g(k: int, n: int = N) -> GrassmannElem:
    return GrassmannElem.gen(n, k)


def one(n: int = N) -> GrassmannElem:
    return GrassmannElem.scalar(n, 1)


def elems(n: int = N, parity: int | None = None):
    masks = [m for m in range(1 << n) if parity is None or bin(m).count("1") % 2 == parity]
    coeffs = st.one_of(st.integers(-4, 4), st.fractions(min_value=-3, max_value=3, max_denominator=4))
    return st.dictionaries(st.sampled_from(masks), coeffs, max_size=6).map(lambda t: GrassmannElem(n, t))


def units(n: int = N):
    return st.tuples(elems(n, 0), st.sampled_from([-2, -1, 1, 3, Fraction(1, 2)])).map(lambda p: p[0].soul() + p[1])


def test_odd_square_vanishes():
    assert (g(1) * g(1)).is_zero()


def test_generators_anticommute():
    assert g(1) * g(2) == GrassmannElem.monomial(N, [1, 2])
    assert g(2) * g(1) == -GrassmannElem.monomial(N, [1, 2])


def test_one_plus_minus_product():
    t12 = g(1) * g(2)
    assert (one() + t12) * (one() - t12) == one()


def test_mismatched_rings_rejected():
    with pytest.raises(ValueError):
        gr_mul(g(1, 3), g(1, 4))


def test_inverse_examples():
    t12 = g(1) * g(2)
    assert gr_inv(one()) == one()
    assert gr_inv(one() - t12) == one() + t12
    assert gr_inv(t12 + 2) == one() * Fraction(1, 2) - t12 * Fraction(1, 4)


def test_inverse_needs_body():
    with pytest.raises(ZeroDivisionError):
        gr_inv(g(1) * g(2))


def test_power_examples():
    t = one() - g(1) * g(2)
    assert gr_power(t, -1) == one() + g(1) * g(2)
    assert gr_power(g(1) * g(2) + 5, 0) == one()
    for mu in range(-4, 5):
        assert gr_power(t, mu) == one() - g(1) * g(2) * mu


def test_negative_power_of_non_unit_fails():
    with pytest.raises(ZeroDivisionError):
        gr_power(g(1) * g(2), -1)


def test_truncated_ring_kills_products_of_odd_elements():
    a = GrassmannElem.gen(3, 1, max_degree=1)
    b = GrassmannElem.gen(3, 2, max_degree=1)
    assert (a * b).is_zero()


def test_text_round_trip_example():
    x = parse_grassmann("3/2 + 1*t1t3 - 2*t1t2t3t4", 4)
    assert format_grassmann(x) == "3/2 + 1*t1t3 - 2*t1t2t3t4"
    assert x.body == Fraction(3, 2)


def test_sqrt2_arithmetic():
    x = Scalar(3, 2, 2)
    assert x * x.conjugate() == 9 - 8
    assert SQRT2 * SQRT2 == 2
    with pytest.raises(ValueError):
        Scalar(0, 1, 2) + Scalar(0, 1, 3)


def test_dual_numbers():
    eps = dual_epsilon(one())
    assert eps * eps == DualNumber(0, 0)
    x = DualNumber(g(1), g(2))
    assert x.project() == g(1)
    assert (x * eps).eps_part() == g(1)


def test_exp_of_nilpotent():
    t12 = g(1) * g(2)
    assert gr_exp_nilpotent(t12) == one() + t12
    assert gr_exp_nilpotent(t12 + g(3) * g(4)) == one() + t12 + g(3) * g(4) + g(1) * g(2) * g(3) * g(4)


@given(elems(), elems(), elems())
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(st.integers(0, 1), st.integers(0, 1), st.data())
def test_super_commutative(px, py, data):
    x = data.draw(elems(parity=px))
    y = data.draw(elems(parity=py))
    assert x * y == (y * x) * (-1) ** (px * py)


@given(elems(parity=0), elems(parity=1), elems(parity=1))
def test_parity_of_products(e, o1, o2):
    assert (e * o1).is_odd()
    assert (o1 * o2).is_even()
    assert (e * e).is_even()


@given(units())
def test_unit_inverse(u):
    assert u * gr_inv(u) == one()
    assert gr_inv(u) * u == one()


@given(units(), st.integers(-3, 3), st.integers(-3, 3))
def test_power_is_homomorphism(u, a, b):
    assert gr_power(u, a) * gr_power(u, b) == gr_power(u, a + b)


@given(st.lists(elems(parity=1).map(lambda x: x.soul()), min_size=N + 1, max_size=N + 1))
def test_odd_filtration_vanishes_beyond_n(xs):
    prod = one()
    for x in xs:
        prod = prod * x
    assert prod.is_zero()


@given(elems())
def test_text_round_trip(x):
    assert parse_grassmann(format_grassmann(x), N) == x


@given(st.fractions(max_denominator=5), st.fractions(max_denominator=5))
def test_sqrt2_norm(a, b):
    x = Scalar(a, b, 2)
    assert x * x.conjugate() == a * a - 2 * b * b
