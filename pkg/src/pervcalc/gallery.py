"""Worked examples on the node (two branches), over any supported ring.

Every entry re-derives its expected values with the functors when it is
built; a mismatch raises instead of returning a wrong object.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .functors import Location, induced_stalk_maps, locations, nearby_and_vanishing, stalk_cohomology, support
from .linalg import ZZ, FGModule, ModuleMap, Ring
from .perv import (
    PervMorphism,
    PervObject,
    direct_sum,
    direct_sum_structure,
    morphism_classify,
    perv_factorization,
    validate_morphism,
    validate_object,
)

NAMES = ("rx_shift", "ic_x", "m_shift", "t_resolution", "s_inclusion", "endo_example",
         "jshriek_branch", "jstar_branch")


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    kind: str  # "object" or "morphism"
    value: object
    description: str
    expected: dict = field(default_factory=dict)


def _R(ring: Ring, n: int = 1) -> FGModule:
    return FGModule(ring, n)


def rx_shift(ring: Ring = ZZ) -> PervObject:
    """The shifted constant sheaf: Psi_1 = Psi_2 = Phi = R, can = (1, -1), var = 0."""
    R = _R(ring)
    return PervObject(ring, [R, R], R, [[[1]], [[-1]]], [[[0]], [[0]]])


def ic_x(ring: Ring = ZZ) -> PervObject:
    """Sum of the extensions by zero of the constant sheaves on the two axes."""
    R, O = _R(ring), _R(ring, 0)
    z = ModuleMap.zero
    return PervObject(ring, [R, R], O, [z(R, O), z(R, O)], [z(O, R), z(O, R)])


def m_shift(ring: Ring = ZZ) -> PervObject:
    """The skyscraper at the origin (stalk R in degree 0)."""
    R, O = _R(ring), _R(ring, 0)
    z = ModuleMap.zero
    return PervObject(ring, [O, O], R, [z(O, R), z(O, R)], [z(R, O), z(R, O)])


def jshriek_branch(ring: Ring = ZZ) -> PervObject:
    R, O = _R(ring), _R(ring, 0)
    z = ModuleMap.zero
    return PervObject(ring, [R, O], R, [ModuleMap.identity(R), z(O, R)], [z(R, R), z(R, O)])


def jstar_branch(ring: Ring = ZZ) -> PervObject:
    R, O = _R(ring), _R(ring, 0)
    z = ModuleMap.zero
    return PervObject(ring, [R, O], R, [z(R, R), z(O, R)], [ModuleMap.identity(R), z(R, O)])


def t_resolution(ring: Ring = ZZ) -> PervMorphism:
    """R_X[1] -> I_X: identity on each branch, zero on vanishing cycles."""
    P, Q = rx_shift(ring), ic_x(ring)
    return PervMorphism(P, Q, [ModuleMap.identity(M) for M in P.psi], ModuleMap.zero(P.phi, Q.phi))


def s_inclusion(ring: Ring = ZZ) -> PervMorphism:
    """M[-1] -> R_X[1]: identity on vanishing cycles."""
    P, Q = m_shift(ring), rx_shift(ring)
    return PervMorphism(P, Q, [ModuleMap.zero(M, N) for M, N in zip(P.psi, Q.psi)],
                        ModuleMap.identity(P.phi))


def endo_example(ring: Ring = ZZ) -> PervMorphism:
    """T(a, b) = (0, S(a)) on M[-1] + R_X[1]."""
    S = s_inclusion(ring)
    _, _, inj_rx, prj_m, _ = direct_sum_structure(S.source, S.target)
    return inj_rx @ S @ prj_m


_BUILDERS = {
    "rx_shift": (rx_shift, "object", "shifted constant sheaf R_X[1] on the node"),
    "ic_x": (ic_x, "object", "intersection cohomology sheaf I_X of the node"),
    "m_shift": (m_shift, "object", "skyscraper M[-1] at the origin"),
    "t_resolution": (t_resolution, "morphism", "natural map T: R_X[1] -> I_X"),
    "s_inclusion": (s_inclusion, "morphism", "inclusion S: M[-1] -> R_X[1]"),
    "endo_example": (endo_example, "morphism", "endomorphism T(a,b) = (0, S(a)) of M[-1] + R_X[1]"),
    "jshriek_branch": (jshriek_branch, "object", "extension by zero from branch 1"),
    "jstar_branch": (jstar_branch, "object", "direct image from branch 1"),
}


def _stalk_sig(P: PervObject) -> dict:
    return {str(loc): (str(stalk_cohomology(P, loc)[-1]), str(stalk_cohomology(P, loc)[0]))
            for loc in locations(P.branches)}


def _all_stalk_maps_zero(T: PervMorphism) -> bool:
    return all(m.is_zero() for loc in locations(T.branches)
               for m in induced_stalk_maps(T, loc).maps.values())


def _expected(name: str, value, ring: Ring) -> dict:
    """Values every entry must reproduce, computed fresh."""
    R = _R(ring)
    R2 = _R(ring, 2)
    O = _R(ring, 0)
    if name == "rx_shift":
        return {
            "stalk_origin": ({-1: R, 0: O}, stalk_cohomology(value, Location.origin()).groups),
            "stalk_branch": ({-1: R, 0: O}, stalk_cohomology(value, Location(1)).groups),
            "phi": (R, nearby_and_vanishing(value).phi),
        }
    if name == "ic_x":
        return {
            "stalk_origin": ({-1: R2, 0: O}, stalk_cohomology(value, Location.origin()).groups),
            "phi": (O, nearby_and_vanishing(value).phi),
        }
    if name == "m_shift":
        return {
            "stalk_origin": ({-1: O, 0: R}, stalk_cohomology(value, Location.origin()).groups),
            "support": ("{origin}", str(support(value))),
        }
    if name == "t_resolution":
        F = perv_factorization(value)
        fl = morphism_classify(value)
        diag = induced_stalk_maps(value, Location.origin()).maps[-1]
        return {
            "kernel": (m_shift(ring), F.kernel),
            "surjective": (True, fl.surjective),
            "injective": (False, fl.injective),
            "branch_stalk_map": (ModuleMap.identity(R), induced_stalk_maps(value, Location(1)).maps[-1]),
            "origin_stalk_map_injective": (True, diag.is_injective()),
            "origin_stalk_map_surjective": (False, diag.is_surjective()),
        }
    if name == "s_inclusion":
        fl = morphism_classify(value)
        return {
            "injective": (True, fl.injective),
            "surjective": (False, fl.surjective),
            "stalk_maps_zero": (True, _all_stalk_maps_zero(value)),
        }
    if name == "endo_example":
        F = perv_factorization(value)
        return {
            "kernel": (rx_shift(ring), F.kernel),
            "image": (m_shift(ring), F.image),
            "cokernel": (direct_sum(m_shift(ring), ic_x(ring)), F.cokernel),
            "stalk_maps_zero": (True, _all_stalk_maps_zero(value)),
        }
    if name == "jshriek_branch":
        return {"stalk_origin": ({-1: O, 0: O}, stalk_cohomology(value, Location.origin()).groups)}
    if name == "jstar_branch":
        return {"stalk_origin": ({-1: R, 0: R}, stalk_cohomology(value, Location.origin()).groups)}
    return {}


def gallery(name: str, ring: Ring = ZZ) -> GalleryEntry:
    try:
        build, kind, desc = _BUILDERS[name]
    except KeyError:
        raise InputError(f"gallery: unknown name {name!r} (choose from {', '.join(NAMES)})") from None
    value = build(ring)
    if kind == "object":
        rep = validate_object(value)
    else:
        rep = validate_object(value.source)
        rep = rep if not rep.ok else validate_object(value.target)
        rep = rep if not rep.ok else validate_morphism(value)
    if not rep.ok:
        raise AssertionError(f"gallery {name}: invalid: {rep.violations[0]}")
    expected = _expected(name, value, ring)
    for key, (want, got) in expected.items():
        if want != got:
            raise AssertionError(f"gallery {name}: {key} expected {want}, computed {got}")
    return GalleryEntry(name, kind, value, desc, {k: v[0] for k, v in expected.items()})


def gallery_objects(ring: Ring = ZZ) -> dict[str, PervObject]:
    return {n: gallery(n, ring).value for n in NAMES if _BUILDERS[n][1] == "object"}
