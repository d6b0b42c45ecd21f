import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_isotopes.ff import (
    DivisionByZero,
    FieldError,
    FieldMismatch,
    FieldSpec,
    NotPrime,
    ReducibleModulus,
    is_prime,
    make_field,
)

FIELDS = [(2, 1), (2, 3), (3, 2), (3, 3), (5, 1), (2, 6), (7, 2), (5, 4)]


def test_smallest_moduli():
    # x^3 + x + 1 and x^3 + 2x + 1 are the first irreducible cubics by encoding
    assert make_field(2, 3).modulus == (1, 1, 0, 1)
    assert make_field(3, 3).modulus == (1, 2, 0, 1)
    assert make_field(2, 1).modulus == (0, 1)
    assert make_field(2, 2).modulus == (1, 1, 1)


def test_alpha_cubed():
    K = make_field(2, 3)
    alpha = K([0, 1])
    assert (alpha**3).value == 3  # alpha + 1


@pytest.mark.parametrize("p", [1, 4, 9, 15])
def test_not_prime(p):
    with pytest.raises(NotPrime):
        make_field(p, 2)


def test_reducible_modulus():
    with pytest.raises(ReducibleModulus):
        make_field(2, 3, [1, 1, 1, 1])
    with pytest.raises(FieldError):
        make_field(2, 3, [1, 1, 0, 0])


def test_explicit_modulus_accepted():
    K = make_field(2, 3, [1, 0, 1, 1])
    assert K.modulus == (1, 0, 1, 1)
    assert K != make_field(2, 3)


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("p,d", FIELDS)
def test_generator_is_primitive(p, d):
    K = make_field(p, d)
    g = K.generator
    seen = {K.pow(g, k) for k in range(K.order - 1)}
    assert len(seen) == K.order - 1


@pytest.mark.parametrize("p,d", FIELDS)
def test_table_mul_matches_schoolbook(p, d):
    K = make_field(p, d)
    step = max(1, K.order // 40)
    for a in range(0, K.order, step):
        for b in range(0, K.order, step):
            assert K.mul(a, b) == K._mul_slow(a, b)


@pytest.mark.parametrize("p,d", FIELDS)
def test_frobenius_fixes_prime_field(p, d):
    K = make_field(p, d)
    fixed = [a for a in range(K.order) if K.frobenius(a, p) == a]
    assert fixed == list(range(p))


def test_division_by_zero():
    K = make_field(3, 2)
    with pytest.raises(DivisionByZero):
        K.inv(0)
    with pytest.raises(ZeroDivisionError):
        K.div(1, 0)


def test_element_wrapper():
    K = make_field(3, 2)
    a, b = K(4), K(7)
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * a.inv() == 1
    assert -a + a == 0
    assert int(K(0)) == 0 and not K(0)
    with pytest.raises(FieldMismatch):
        a + make_field(3, 3)(1)


def test_json_and_pickle_round_trip():
    K = make_field(5, 2)
    assert FieldSpec.from_json(K.to_json()) == K
    assert pickle.loads(pickle.dumps(K)) == K


field_and_elems = st.sampled_from(FIELDS).flatmap(
    lambda pd: st.tuples(
        st.just(make_field(*pd)),
        *[st.integers(0, pd[0] ** pd[1] - 1)] * 3,
    )
)


@settings(max_examples=300, deadline=None)
@given(field_and_elems)
def test_field_axioms(data):
    K, a, b, c = data
    add, mul = K.add, K.mul
    assert add(a, b) == add(b, a)
    assert mul(a, b) == mul(b, a)
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert add(a, K.neg(a)) == 0
    if a:
        assert mul(a, K.inv(a)) == 1
        assert K.pow(a, K.order - 1) == 1


@settings(max_examples=100, deadline=None)
@given(field_and_elems)
def test_frobenius_is_additive_and_multiplicative(data):
    K, a, b, _ = data
    p = K.p
    assert K.frobenius(K.add(a, b), p) == K.add(K.frobenius(a, p), K.frobenius(b, p))
    assert K.frobenius(K.mul(a, b), p) == K.mul(K.frobenius(a, p), K.frobenius(b, p))
