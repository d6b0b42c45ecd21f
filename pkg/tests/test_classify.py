import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_isotopes.algebra import IsotopePresentation, from_presentation
from cyclic_isotopes.atlas import random_operator
from cyclic_isotopes.classify import (
    CriticalRelations,
    ExplicitMap,
    ExtensionMismatch,
    TypeMismatch,
    act_presentation,
    canonicalize,
    compose_witness,
    det_invariant,
    invert_witness,
    iso_critical,
    iso_cubic_cases,
    type_partition,
    verify_witness,
    witness_from_json,
)
from cyclic_isotopes.classify import _g_image
from cyclic_isotopes.galois import build_extension
from cyclic_isotopes.oracle import oracle_for
from cyclic_isotopes.twistop import TwistedOperator, identity, is_invertible, tau_power

E8 = build_extension(2, 1, 3)
E27 = build_extension(3, 1, 3)
E64 = build_extension(2, 2, 3)


def pres(ext, f, g):
    return IsotopePresentation(ext, TwistedOperator(ext, f), TwistedOperator(ext, g))


def random_pres(ext, rng):
    return IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng))


def random_witness(ext, rng):
    return CriticalRelations(rng.randrange(1, ext.order), rng.randrange(1, ext.order), rng.randrange(ext.n))


def test_type_partition_examples():
    assert type_partition(identity(E8)) == ((1, 2), (), (0,))
    assert type_partition(TwistedOperator(E8, (1, 2, 0))) == ((2,), (), (0, 1))
    assert type_partition(TwistedOperator(E8, (0, 3, 5))) == ((0,), (), (1, 2))


def test_identity_presentation_is_type_5():
    C = canonicalize(pres(E8, (1, 0, 0), (1, 0, 0)))
    assert C.tag.index == 5
    assert C.g == (1, 0, 0)


def test_type_1_lands_in_m():
    rng = random.Random(4)
    seen = 0
    while seen < 30:
        P = random_pres(E27, rng)
        if all(P.f.coeffs):
            C = canonicalize(P)
            assert C.tag.index == 1 and C.f[0] == 1 and C.f[1] in E27.M
            seen += 1


def test_no_invertible_operator_of_types_2_or_3_over_gf2():
    for y in range(1, 8):
        assert not is_invertible(TwistedOperator(E8, (1, y, 0)))
        assert not is_invertible(TwistedOperator(E8, (1, 0, y)))


def test_self_isomorphism_is_trivial():
    rng = random.Random(1)
    for _ in range(20):
        P = random_pres(E27, rng)
        assert iso_critical(P, P) == CriticalRelations(1, 1, 0)


def test_unital_and_non_unital_differ():
    P = IsotopePresentation(E8, tau_power(E8, 1), identity(E8))
    Q = IsotopePresentation(E8, identity(E8), identity(E8))
    assert iso_critical(P, Q) is None
    assert iso_critical(Q, P) is None


def test_mismatches():
    P = pres(E8, (1, 0, 0), (1, 0, 0))
    Q = pres(E27, (1, 0, 0), (1, 0, 0))
    with pytest.raises(ExtensionMismatch):
        iso_critical(P, Q)
    with pytest.raises(TypeMismatch):
        iso_cubic_cases(canonicalize(P), canonicalize(pres(E8, (0, 1, 0), (1, 0, 0))))


def test_witness_json():
    w = CriticalRelations(3, 5, 2)
    assert witness_from_json(w.to_json()) == w
    m = ExplicitMap([[1, 0], [0, 1]])
    assert witness_from_json(m.to_json()) == m
    with pytest.raises(ValueError):
        witness_from_json({"kind": "other"})


def test_explicit_map_witness():
    ext = E27
    orc = oracle_for(ext)
    rng = random.Random(2)
    P = random_pres(ext, rng)
    Q = act_presentation(P, random_witness(ext, rng))
    phi = orc.find(from_presentation(P), from_presentation(Q))
    assert phi is not None
    assert verify_witness(P, Q, ExplicitMap(orc.to_matrix(phi)))
    assert not verify_witness(P, Q, ExplicitMap([[1, 0, 0], [0, 1, 0], [0, 0, 2]])) or P == Q


def test_type_5_conjugate_witness():
    # g' = tau g tau^-1 is reached with sigma = tau
    rng = random.Random(8)
    for _ in range(10):
        g = random_operator(E27, rng)
        if g.coeffs[0] == 0:
            continue
        C = canonicalize(IsotopePresentation(E27, identity(E27), g))
        D = IsotopePresentation(E27, identity(E27), C.presentation.g.conjugate(1))
        w = iso_cubic_cases(C, canonicalize(D))
        assert w is not None and verify_witness(C, D, w)


def test_corrected_type_2_sigma_tau_formula():
    """For type 2 with sigma = tau the scaling element is a tau(y2); a tau(y2^-1) fails once M leaves F."""
    rng = random.Random(3)
    K = E64.K
    checked = 0
    while checked < 10:
        f = TwistedOperator(E64, (1, 0, rng.randrange(1, E64.order)))
        if not is_invertible(f):
            continue
        C = canonicalize(IsotopePresentation(E64, f, random_operator(E64, rng)))
        y2 = C.f[2]
        if E64.in_base_field(y2):
            continue
        good = pres(E64, C.f, _g_image(E64, C.g, 1, E64.tau(y2, 1), 1))
        bad = pres(E64, C.f, _g_image(E64, C.g, 1, E64.tau(K.inv(y2), 1), 1))
        assert iso_critical(C, good) is not None
        assert iso_cubic_cases(C, canonicalize(good)) is not None
        assert not verify_witness(C, bad, CriticalRelations(1, E64.tau(K.inv(y2), 1), 1))
        assert iso_critical(C, bad) is None
        checked += 1


def test_type_2_sigma_tau2_scalar_reading():
    """The free scalar in the (type 2, sigma = tau^2) subcase ranges over F^x; the K^x reading overclaims."""
    orc = oracle_for(E27)
    rng = random.Random(3)
    K = E27.K
    overclaims = 0
    for _ in range(20):
        while True:
            C = canonicalize(random_pres(E27, rng))
            if C.tag.index == 2:
                break
        y2 = C.f[2]
        h = _g_image(E27, C.g, 1, K.inv(y2), 2)
        a = rng.choice([x for x in range(1, 27) if not E27.in_base_field(x)])
        z = tuple(K.mul(a, x) for x in h)
        if not is_invertible(TwistedOperator(E27, z)):
            continue
        D = canonicalize(pres(E27, C.f, z))
        truth = orc.is_isomorphic(from_presentation(C.presentation), from_presentation(D.presentation))
        assert (iso_cubic_cases(C, D, scalars_2iii="F") is not None) == truth
        assert (iso_critical(C, D) is not None) == truth
        overclaims += (iso_cubic_cases(C, D, scalars_2iii="K") is not None) and not truth
    assert overclaims > 0


def test_det_invariant_trivial():
    rng = random.Random(0)
    assert det_invariant(pres(E8, (1, 0, 0), (1, 0, 0))) == (1, 1)
    for _ in range(20):
        P = random_pres(E27, rng)
        Q = act_presentation(P, random_witness(E27, rng))
        assert det_invariant(P) == det_invariant(Q) == (1, 1)


exts = st.sampled_from([E8, E27, build_extension(2, 1, 2), build_extension(3, 1, 2), build_extension(2, 1, 4)])


@settings(max_examples=150, deadline=None)
@given(exts, st.integers(0, 2**32))
def test_witness_group_laws(ext, seed):
    rng = random.Random(seed)
    P = random_pres(ext, rng)
    w1, w2 = random_witness(ext, rng), random_witness(ext, rng)
    Q = act_presentation(P, w1)
    R = act_presentation(Q, w2)
    assert verify_witness(P, Q, w1)
    assert act_presentation(P, compose_witness(ext, w2, w1)) == R
    assert act_presentation(Q, invert_witness(ext, w1)) == P


@settings(max_examples=150, deadline=None)
@given(exts, st.integers(0, 2**32))
def test_canonical_form_properties(ext, seed):
    rng = random.Random(seed)
    P = random_pres(ext, rng)
    C = canonicalize(P)
    assert verify_witness(P, C, C.witness)
    assert canonicalize(C.presentation).presentation == C.presentation
    assert C.f[0] in (0, 1)
    Q = act_presentation(P, random_witness(ext, rng))
    D = canonicalize(Q)
    assert C.tag == D.tag
    w = iso_critical(C, D)
    assert w is not None and verify_witness(C, D, w)
    if ext.n == 3:
        c = iso_cubic_cases(C, D)
        assert c is not None and verify_witness(C, D, c)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([E8, build_extension(2, 1, 2), build_extension(3, 1, 2)]), st.integers(0, 2**32))
def test_fast_search_matches_full_scan(ext, seed):
    rng = random.Random(seed)
    P = canonicalize(random_pres(ext, rng))
    Q = canonicalize(act_presentation(P.presentation, random_witness(ext, rng))) if rng.random() < 0.5 else canonicalize(random_pres(ext, rng))
    assert iso_critical(P, Q) == iso_critical(P, Q, exhaustive=True)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_scaled_operators_isomorphic(seed):
    rng = random.Random(seed)
    P = random_pres(E27, rng)
    a, b = rng.choice(E27.F_units), rng.choice(E27.F_units)
    Q = IsotopePresentation(E27, P.f.scaled(a), P.g.scaled(b))
    w = iso_critical(P, Q)
    assert w is not None and verify_witness(P, Q, w)
