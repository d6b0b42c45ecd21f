import json

import pytest

from cyclic_isotopes.atlas import atlas, invertible_operators
from cyclic_isotopes.galois import build_extension
from cyclic_isotopes.oracle import BudgetExceeded

E8 = build_extension(2, 1, 3)


@pytest.fixture(scope="module")
def atlas8():
    return atlas(E8, oracle=True)


def test_invertible_count():
    assert len(invertible_operators(E8)) == 168


def test_frozen_counts_gf8(atlas8):
    forms = {k[0]: sum(len(c) for c in v) for k, v in atlas8.groups.items()}
    assert forms == {1: 504, 4: 14, 5: 22, 7: 168, 8: 168}
    assert {k[0]: n for k, n in atlas8.class_counts().items()} == {1: 168, 4: 2, 5: 8, 7: 12, 8: 10}
    assert atlas8.presentations == 168**2
    assert atlas8.oracle_agrees


def test_json_lists_every_cubic_type(atlas8):
    obj = atlas8.to_json()
    assert [t["type_index"] for t in obj["types"]] == list(range(1, 9))
    empty = {t["type_index"] for t in obj["types"] if t["class_count"] == 0}
    assert empty == {2, 3, 6}
    assert obj["total_classes"] == 200
    assert obj["mode"] == "exhaustive" and obj["seed"] is None


@pytest.mark.parametrize("key,expected", [((2, 1, 2), {3: 1, 4: 1, 5: 3}), ((3, 1, 2), {1: 12, 3: 1, 4: 3, 5: 4})])
def test_frozen_counts_quadratic(key, expected):
    rep = atlas(build_extension(*key), oracle=True)
    assert {k[0]: n for k, n in rep.class_counts().items()} == expected
    assert rep.oracle_agrees


def test_budget():
    with pytest.raises(BudgetExceeded):
        atlas(build_extension(3, 1, 3))


def test_sampled_is_seeded():
    ext = build_extension(3, 1, 3)
    a = json.dumps(atlas(ext, samples=40, seed=7).to_json(), sort_keys=True)
    b = json.dumps(atlas(ext, samples=40, seed=7).to_json(), sort_keys=True)
    c = json.dumps(atlas(ext, samples=40, seed=8).to_json(), sort_keys=True)
    assert a == b != c
    assert json.loads(a)["mode"] == "sampled"
