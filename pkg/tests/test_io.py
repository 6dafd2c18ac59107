import json

import pytest
from hypothesis import given

from pervcalc import io
from pervcalc.errors import InputError
from pervcalc.gallery import NAMES, gallery
from pervcalc.linalg import QQ, ZZ, Ring

from strategies import perv_morphisms, perv_objects


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("ring", (ZZ, QQ, Ring.fp(5)), ids=str)
def test_gallery_round_trip(name, ring):
    value = gallery(name, ring).value
    text = io.dumps(value)
    back = io.loads(text)
    assert back == value
    assert io.dumps(back) == text


@given(perv_objects())
def test_object_round_trip(P):
    text = io.dumps(P)
    assert io.loads(text) == P
    assert io.dumps(io.loads(text)) == text


@given(perv_morphisms())
def test_morphism_round_trip(T):
    text = io.dumps(T)
    assert io.loads(text) == T
    assert io.dumps(io.loads(text)) == text


def _disk(entry="1", ring="q"):
    return {"kind": "object", "ring": ring, "branches": 1, "psi": [{"dim": 1}],
            "phi": {"dim": 1}, "can": [[[entry]]], "var": [[["0"]]]}


def test_rationals_are_normalised():
    P = io.object_from_json(_disk("2/4"))
    assert json.loads(io.dumps(P))["can"] == [[["1/2"]]]


def test_floats_rejected():
    data = _disk()
    data["can"] = [[[0.5]]]
    with pytest.raises(InputError, match=r"object\.can\[0\]"):
        io.object_from_json(data)
    with pytest.raises(InputError, match="decimals"):
        io.object_from_json(_disk("0.5"))


def test_bad_invariant_factors_name_the_field():
    data = {"kind": "object", "ring": "z", "branches": 1,
            "psi": [{"free_rank": 0, "invariant_factors": [4, 2]}],
            "phi": {"free_rank": 0, "invariant_factors": []},
            "can": [[]], "var": [[]]}
    with pytest.raises(InputError, match=r"object\.psi\[0\]"):
        io.object_from_json(data)


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.pop("phi"), "object.phi"),
    (lambda d: d.update(extra=1), "object.extra"),
    (lambda d: d.update(ring="r"), "object.ring"),
    (lambda d: d.update(branches=0), "object.branches"),
    (lambda d: d.update(psi=[{"dim": -1}]), "object.psi[0]"),
    (lambda d: d.update(psi=[{"dim": True}]), "object.psi[0]"),
    (lambda d: d.update(can=[[["1", "2"]]]), "object.can[0]"),
    (lambda d: d.update(var=[]), "object.var"),
])
def test_malformed_objects(mutate, where):
    data = _disk()
    mutate(data)
    with pytest.raises(InputError) as e:
        io.object_from_json(data)
    assert str(e.value).startswith(where)


def test_morphism_mismatches():
    T = gallery("t_resolution").value
    data = io.to_json(T)
    data["target"]["ring"] = "q"
    data["target"]["psi"] = [{"dim": 1}, {"dim": 1}]
    data["target"]["phi"] = {"dim": 0}
    with pytest.raises(InputError, match="morphism.target.ring"):
        io.morphism_from_json(data)
    data = io.to_json(T)
    data["a"] = data["a"][:1]
    with pytest.raises(InputError, match="morphism.a"):
        io.morphism_from_json(data)


def test_not_json():
    with pytest.raises(InputError, match="not valid JSON"):
        io.loads("{")


def test_ill_defined_torsion_map_rejected():
    data = {"kind": "object", "ring": "z", "branches": 1,
            "psi": [{"free_rank": 0, "invariant_factors": [2]}],
            "phi": {"free_rank": 1, "invariant_factors": []},
            "can": [[["1"]]], "var": [[["0"]]]}
    with pytest.raises(InputError, match=r"object\.can\[0\]"):
        io.object_from_json(data)
