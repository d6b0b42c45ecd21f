import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_isotopes import linalg
from cyclic_isotopes.algebra import (
    AlgebraStructure,
    IsotopePresentation,
    NotAField,
    SingularAlgebra,
    SingularMap,
    field_algebra,
    from_presentation,
    heart_decomposition,
    is_regular,
    isotope,
    kaplansky_heart,
    make_presentation,
    recognize_field_heart,
    transport,
)
from cyclic_isotopes.atlas import random_operator
from cyclic_isotopes.galois import build_extension
from cyclic_isotopes.twistop import SingularOperator, TwistedOperator, identity, left_mul, tau_power
from cyclic_isotopes.verify import random_gl

E8 = build_extension(2, 1, 3)
E27 = build_extension(3, 1, 3)


def test_field_tensor():
    K = field_algebra(E8)
    assert K.unit() == 1
    assert K.is_commutative() and K.is_associative() and K.is_division()
    assert is_regular(K) == (1, 1)
    for x in range(8):
        for y in range(8):
            assert K.mul(x, y) == E8.K.mul(x, y)


def test_tau_isotope_has_no_unit():
    A = from_presentation(IsotopePresentation(E8, tau_power(E8, 1), identity(E8)))
    assert A.unit() is None
    assert not A.is_commutative()
    assert A.is_division()


def test_unital_isotope_of_left_multiplication():
    # x * y = (w x) y has unit w^-1
    for w in range(1, E27.order):
        A = from_presentation(IsotopePresentation(E27, left_mul(E27, w), identity(E27)))
        assert A.unit() == E27.K.inv(w)


def test_zero_tensor_not_regular():
    zero = AlgebraStructure(E8, [[[0] * 3] * 3] * 3)
    assert is_regular(zero) is None
    assert heart_decomposition(zero) is None
    with pytest.raises(SingularAlgebra):
        kaplansky_heart(zero)
    assert zero.zero_divisor_pair() == (1, 1)


def test_validation():
    with pytest.raises(ValueError):
        AlgebraStructure(E8, [[[0] * 3] * 3] * 2)
    with pytest.raises(ValueError):
        AlgebraStructure(E8, [[[2, 0, 0]] * 3] * 3)  # 2 is not in GF(2)
    with pytest.raises(SingularMap):
        isotope(field_algebra(E8), linalg.zeros(3, 3), linalg.identity(3))
    with pytest.raises(SingularOperator, match="g"):
        make_presentation(E8, identity(E8), TwistedOperator(E8, (1, 1, 0)))


def test_json_round_trip():
    A = from_presentation(IsotopePresentation(E27, tau_power(E27, 2), left_mul(E27, 5)))
    assert AlgebraStructure.from_json(A.to_json()) == A
    P = IsotopePresentation(E27, tau_power(E27, 2), left_mul(E27, 5))
    assert IsotopePresentation.from_json(P.to_json()) == P


def test_non_field_heart_rejected():
    # GF(2)^3 with componentwise product: unital, commutative, associative, not a field
    c = [[[1 if i == j == k else 0 for k in range(3)] for j in range(3)] for i in range(3)]
    with pytest.raises(NotAField):
        recognize_field_heart(AlgebraStructure(E8, c))


def test_tau_isotope_decomposition():
    A = from_presentation(IsotopePresentation(E8, tau_power(E8, 1), identity(E8)))
    d = heart_decomposition(A)
    assert d.presentation.f.coeffs == (0, 1, 0)
    assert d.presentation.g.coeffs == (1, 0, 0)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([E8, E27]), st.integers(0, 2**32))
def test_opposite_swaps_operators(ext, seed):
    rng = random.Random(seed)
    f, g = random_operator(ext, rng), random_operator(ext, rng)
    A = from_presentation(IsotopePresentation(ext, f, g))
    assert A.opposite() == from_presentation(IsotopePresentation(ext, g, f))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([E8, E27]), st.integers(0, 2**32))
def test_heart_round_trip(ext, seed):
    rng = random.Random(seed)
    P = IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng))
    phi = random_gl(ext, rng)
    A = transport(from_presentation(P), phi)
    d = heart_decomposition(A)
    assert d is not None
    B = d.heart.B
    assert B.unit() == d.heart.unit == A.mul(d.heart.u, d.heart.v)
    assert B.is_commutative() and B.is_associative()
    assert transport(A, d.phi) == from_presentation(d.presentation)
    # the heart data rebuild A
    assert isotope(B, d.heart.f, d.heart.g) == A


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_division_for_invertible_operators(seed):
    rng = random.Random(seed)
    A = from_presentation(IsotopePresentation(E27, random_operator(E27, rng), random_operator(E27, rng)))
    assert A.zero_divisor_pair(exhaustive=True) is None
    assert A.zero_divisor_pair(exhaustive=False) is None
