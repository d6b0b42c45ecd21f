import pickle
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_isotopes.galois import (
    CyclicExtension,
    NonGeneratingPower,
    NormNotOne,
    NotInvertible,
    build_extension,
)

EXTS = [(2, 1, 3), (3, 1, 3), (2, 2, 3), (2, 1, 2), (3, 1, 2), (2, 1, 4), (5, 1, 3), (2, 3, 2)]


@pytest.mark.parametrize("key", EXTS)
def test_tau_has_order_n_and_fixes_f(key):
    ext = build_extension(*key)
    for x in range(ext.order):
        assert ext.tau(x, ext.n) == x
    fixed = [x for x in range(ext.order) if ext.tau(x) == x]
    assert fixed == ext.F_elems and len(fixed) == ext.q
    if ext.n > 1:
        assert any(ext.tau(x, k) != x for x in range(ext.order) for k in range(1, ext.n))


@pytest.mark.parametrize("key", EXTS)
def test_norm_and_trace_land_in_f(key):
    ext = build_extension(*key)
    for x in range(ext.order):
        assert ext.in_base_field(ext.norm(x))
        assert ext.in_base_field(ext.trace(x))
    assert set(ext.norm(x) for x in range(1, ext.order)) == set(ext.F_units)


@pytest.mark.parametrize("key", EXTS)
def test_hilbert90_sets(key):
    ext = build_extension(*key)
    K = ext.K
    quotients = {K.div(ext.tau(v), v) for v in range(1, ext.order)}
    assert quotients == set(ext.S)
    assert len(ext.S) == (ext.q**ext.n - 1) // (ext.q - 1)


def test_small_transversals():
    assert build_extension(2, 1, 3).M == [1]
    assert len(build_extension(2, 1, 3).S) == 7
    assert build_extension(3, 1, 3).M == [1, 2]
    assert len(build_extension(3, 1, 3).S) == 13
    # q = 4: norms of F^x are cubes, all equal to 1, so M leaves F
    M = build_extension(2, 2, 3).M
    assert M[0] == 1 and len(M) == 3
    assert not all(build_extension(2, 2, 3).in_base_field(m) for m in M)


@pytest.mark.parametrize("key", EXTS)
def test_scale_to_m(key):
    ext = build_extension(*key)
    K = ext.K
    for i in range(1, ext.n):
        if gcd(i, ext.n) != 1:
            continue
        for y in range(1, ext.order, max(1, ext.order // 50)):
            m, v = ext.scale_to_M(y, i)
            assert m in ext.M
            assert m == K.mul(K.div(ext.tau(v, i), v), y)


def test_errors():
    ext = build_extension(2, 1, 4)
    with pytest.raises(NonGeneratingPower):
        ext.scale_to_M(3, 2)
    with pytest.raises(NotInvertible):
        ext.scale_to_M(0, 1)
    with pytest.raises(NotInvertible):
        ext.reduce(0)
    e3 = build_extension(3, 1, 3)
    with pytest.raises(NormNotOne):
        e3.hilbert90_solve(2)


def test_coords_round_trip():
    ext = build_extension(3, 1, 3)
    for x in range(ext.order):
        assert ext.from_coords(ext.coords(x)) == x
    assert ext.basis[0] == 1


def test_json_and_pickle():
    ext = build_extension(3, 1, 3)
    assert CyclicExtension.from_json(ext.to_json()) == ext
    assert pickle.loads(pickle.dumps(ext)) is ext


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(EXTS).flatmap(lambda k: st.tuples(st.just(build_extension(*k)), st.integers(1, 10**6), st.integers(1, 10**6))))
def test_norm_multiplicative_trace_additive(data):
    ext, a, b = data
    a, b = a % ext.order, b % ext.order
    K = ext.K
    assert ext.norm(K.mul(a, b)) == K.mul(ext.norm(a), ext.norm(b))
    assert ext.trace(K.add(a, b)) == K.add(ext.trace(a), ext.trace(b))
    assert ext.tau(K.mul(a, b)) == K.mul(ext.tau(a), ext.tau(b))
