import pytest

from pervcalc.errors import InputError
from pervcalc.functors import Location, induced_stalk_maps
from pervcalc.gallery import NAMES, gallery, gallery_objects
from pervcalc.linalg import QQ, ZZ, FGModule, ModuleMap, Ring
from pervcalc.perv import PervMorphism, PervObject, validate_object

RINGS = (ZZ, QQ, Ring.fp(2), Ring.fp(5))


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_every_entry_builds_and_self_checks(name, ring):
    entry = gallery(name, ring)
    assert entry.name == name
    assert entry.description
    assert entry.expected
    kind = PervObject if entry.kind == "object" else PervMorphism
    assert isinstance(entry.value, kind)
    assert entry.value.ring == ring
    assert entry.value.branches == 2


def test_unknown_name():
    with pytest.raises(InputError, match="unknown name"):
        gallery("node")


def test_gallery_objects():
    objs = gallery_objects(ZZ)
    assert set(objs) == {"rx_shift", "ic_x", "m_shift", "jshriek_branch", "jstar_branch"}
    assert all(validate_object(P).ok for P in objs.values())


def test_t_resolution_stalk_maps():
    T = gallery("t_resolution").value
    R = FGModule(ZZ, 1)
    assert induced_stalk_maps(T, Location(1)).maps[-1] == ModuleMap.identity(R)
    diag = induced_stalk_maps(T, Location.origin()).maps[-1]
    # the diagonal Z -> Z^2
    assert diag.matrix.rows in (((1,), (1,)), ((1,), (-1,)), ((-1,), (1,)), ((-1,), (-1,)))


def test_endo_example_is_an_endomorphism():
    T = gallery("endo_example", QQ).value
    assert T.source == T.target
    assert T.source.phi == FGModule(QQ, 2)
