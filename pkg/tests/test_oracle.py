import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_isotopes import linalg
from cyclic_isotopes.algebra import IsotopePresentation, field_algebra, from_presentation, transport
from cyclic_isotopes.atlas import random_operator
from cyclic_isotopes.galois import build_extension
from cyclic_isotopes.oracle import fingerprint, gl_matrices, gl_order, iso_bruteforce, oracle_for
from cyclic_isotopes.twistop import identity, tau_power
from cyclic_isotopes.verify import random_gl

E8 = build_extension(2, 1, 3)
E27 = build_extension(3, 1, 3)


def test_gl_orders():
    assert gl_order(2, 3) == 168
    assert gl_order(3, 3) == 11232
    assert gl_order(2, 2) == 6
    for key in [(2, 1, 3), (3, 1, 2), (2, 2, 2)]:
        ext = build_extension(*key)
        gl = gl_matrices(ext)
        assert len(gl) == gl_order(ext.q, ext.n)
        assert len({m.tobytes() for m in gl}) == len(gl)


def test_identity_first():
    gl = gl_matrices(E8)
    assert np.array_equal(gl[0], np.eye(3, dtype=gl.dtype))
    K = field_algebra(E8)
    assert iso_bruteforce(K, K) == linalg.identity(3)


def test_field_is_not_its_tau_isotope():
    A = from_presentation(IsotopePresentation(E8, tau_power(E8, 1), identity(E8)))
    assert iso_bruteforce(field_algebra(E8), A) is None
    with pytest.raises(ValueError):
        iso_bruteforce(field_algebra(E8), field_algebra(E27))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([E8, E27]), st.integers(0, 2**32))
def test_transport_is_found(ext, seed):
    rng = random.Random(seed)
    A = from_presentation(IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng)))
    phi = random_gl(ext, rng)
    B = transport(A, phi)
    assert fingerprint(A) == fingerprint(B)
    found = iso_bruteforce(A, B)
    assert found is not None
    assert transport(A, found) == B


def test_partition_heads_are_first_members():
    rng = random.Random(5)
    ext = E8
    algs = [from_presentation(IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng))) for _ in range(30)]
    classes = oracle_for(ext).partition(algs)
    assert sorted(i for cl in classes for i in cl) == list(range(30))
    orc = oracle_for(ext)
    for cl in classes:
        assert cl == sorted(cl)
        assert all(orc.is_isomorphic(algs[cl[0]], algs[i]) for i in cl)
    heads = [cl[0] for cl in classes]
    assert not any(orc.is_isomorphic(algs[a], algs[b]) for a in heads for b in heads if a < b)
