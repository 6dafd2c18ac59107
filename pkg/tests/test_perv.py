"""The diagram category: validation, morphisms, factorization, sums, Hom, iso search."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pervcalc.errors import InputError
from pervcalc.gallery import ic_x, m_shift, rx_shift, t_resolution
from pervcalc.linalg import QQ, ZZ, FGModule, ModuleMap, Ring
from pervcalc.linalg.modules import map_factorization
from pervcalc.perv import (
    PervMorphism,
    PervObject,
    compose,
    direct_sum,
    direct_sum_structure,
    find_isomorphism,
    hom_space,
    is_isomorphic,
    morphism_classify,
    perv_factorization,
    validate_morphism,
    validate_object,
)

from strategies import F5, perv_morphisms, perv_objects, rings, seeds


def disk(ring, can, var):
    """One-branch object with Psi = Phi = R."""
    R = FGModule(ring, 1)
    return PervObject(ring, [R], R, [[[can]]], [[[var]]])


# -- validation -------------------------------------------------------------------


def test_a1_violation_detected():
    # id + var o can = 1 + (-1)(1) = 0 on Psi
    P = disk(QQ, 1, -1)
    rep = validate_object(P)
    assert not rep.ok
    assert {v.axiom for v in rep.violations} == {"A1", "A2"}
    assert rep.violations[0].branch == 1


def test_a2_only_violation():
    # two branches: each 1 + v_i c_i = 2 is invertible over Q, but
    # 1 + c1 v1 + c2 v2 = 1 + 1 - 2 = 0 on Phi
    R = FGModule(QQ, 1)
    P = PervObject(QQ, [R, R], R, [[[1]], [[1]]], [[[1]], [[-2]]])
    axioms = [v.axiom for v in validate_object(P).violations]
    assert axioms == ["A2"]


def test_over_z_units_matter():
    assert validate_object(disk(ZZ, 1, 0)).ok
    assert validate_object(disk(ZZ, 1, -2)).ok          # 1 - 2 = -1
    assert not validate_object(disk(ZZ, 1, 1)).ok       # 2 is not a unit in Z
    assert validate_object(disk(QQ, 1, 1)).ok


def test_structural_errors():
    R = FGModule(QQ, 1)
    with pytest.raises(InputError):
        PervObject(QQ, [], R, [], [])
    with pytest.raises(InputError):
        PervObject(QQ, [R], R, [[[1]]], [])
    with pytest.raises(InputError):
        PervObject(QQ, [R], FGModule(ZZ, 1), [[[1]]], [[[0]]])
    with pytest.raises(InputError):
        PervObject(QQ, [R], R, [[[1, 2]]], [[[0]]])


def test_non_commuting_morphism_rejected():
    P = rx_shift(QQ)
    R = FGModule(QQ, 1)
    T = PervMorphism(P, P, [ModuleMap.identity(R), ModuleMap.identity(R)], ModuleMap.zero(R, R))
    rep = validate_morphism(T)
    assert not rep.ok
    assert rep.violations[0].axiom == "commutes-with-can"
    with pytest.raises(InputError):
        perv_factorization(T)


@given(perv_objects())
def test_random_objects_are_valid(P):
    assert validate_object(P).ok


@given(perv_morphisms())
def test_random_morphisms_commute(T):
    assert validate_morphism(T).ok


# -- factorization ------------------------------------------------------------------


@settings(max_examples=40)
@given(perv_morphisms())
def test_factorization_structure(T):
    F = perv_factorization(T)
    for obj in (F.kernel, F.image, F.cokernel):
        assert validate_object(obj).ok
    for mor in (F.iota, F.alpha, F.beta, F.pi):
        assert validate_morphism(mor).ok
    assert compose(F.alpha, F.beta) == T
    assert compose(F.iota, T).is_zero()
    assert compose(T, F.pi).is_zero()
    assert morphism_classify(F.iota).injective
    assert morphism_classify(F.beta).injective
    assert morphism_classify(F.alpha).surjective
    assert morphism_classify(F.pi).surjective


@settings(max_examples=40)
@given(perv_morphisms())
def test_classification_is_componentwise(T):
    flags = morphism_classify(T)
    comps = list(T.a) + [T.b]
    assert flags.injective == all(map_factorization(f).kernel.is_zero() for f in comps)
    assert flags.surjective == all(map_factorization(f).cokernel.is_zero() for f in comps)
    assert flags.zero == T.is_zero()
    assert flags.isomorphism == (flags.injective and flags.surjective)


def test_identity_and_zero_morphisms():
    P = rx_shift(ZZ)
    assert morphism_classify(PervMorphism.identity(P)).isomorphism
    Z = PervMorphism.zero(P, P)
    F = perv_factorization(Z)
    assert F.kernel == P and F.cokernel == P and F.image.is_zero()


# -- direct sums --------------------------------------------------------------------


@settings(max_examples=30)
@given(st.data())
def test_direct_sum_identities(data):
    ring = data.draw(rings)
    P = data.draw(perv_objects(st.just(ring)))
    Q = data.draw(perv_objects(st.just(ring)).filter(lambda Q: Q.branches == P.branches))
    S, iP, iQ, pP, pQ = direct_sum_structure(P, Q)
    assert validate_object(S).ok
    for m in (iP, iQ, pP, pQ):
        assert validate_morphism(m).ok
    assert compose(iP, pP) == PervMorphism.identity(P)
    assert compose(iQ, pQ) == PervMorphism.identity(Q)
    assert compose(iP, pQ).is_zero()
    assert (compose(pP, iP) + compose(pQ, iQ)) == PervMorphism.identity(S)
    assert direct_sum(P, Q) == S


def test_direct_sum_with_zero_is_identity():
    P = rx_shift(ZZ)
    Z = PervObject.zero(ZZ, 2)
    assert direct_sum(P, Z) == P
    assert direct_sum(Z, P) == P


def test_direct_sum_branch_mismatch():
    with pytest.raises(InputError):
        direct_sum(rx_shift(QQ), disk(QQ, 1, 0))


# -- Hom and isomorphism search ----------------------------------------------------------


def test_hom_dimensions_on_gallery():
    # one map onto the IC summand of each branch
    assert len(hom_space(rx_shift(QQ), ic_x(QQ))) == 2
    assert len(hom_space(m_shift(QQ), rx_shift(QQ))) == 1
    assert len(hom_space(ic_x(QQ), m_shift(QQ))) == 0
    assert len(hom_space(rx_shift(QQ), rx_shift(QQ))) == 1


def _permute_phi(P, perm):
    """Relabel the generators of Phi (fields only) by a permutation."""
    n = P.phi.ngens
    rows = [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]
    inv = [[rows[j][i] for j in range(n)] for i in range(n)]
    G = ModuleMap(P.phi, P.phi, rows)
    Gi = ModuleMap(P.phi, P.phi, inv)
    Q = PervObject(P.ring, P.psi, P.phi, [G @ c for c in P.can], [v @ Gi for v in P.var])
    return Q, G


@settings(max_examples=30)
@given(perv_objects(st.sampled_from((QQ, F5))), st.randoms(use_true_random=False))
def test_hom_dimension_invariant_under_relabelling(P, rnd):
    perm = list(range(P.phi.ngens))
    rnd.shuffle(perm)
    Q, G = _permute_phi(P, perm)
    T = PervMorphism(P, Q, [ModuleMap.identity(M) for M in P.psi], G)
    assert validate_morphism(T).ok
    assert len(hom_space(P, P)) == len(hom_space(Q, Q)) == len(hom_space(P, Q))
    res = find_isomorphism(P, Q, seed=1)
    assert res.verdict == "isomorphic"
    assert morphism_classify(res.morphism).isomorphism


@settings(max_examples=30)
@given(perv_objects(st.sampled_from((QQ, F5))), perv_objects(st.sampled_from((QQ, F5))))
def test_hom_basis_is_hom(P, Q):
    if P.ring != Q.ring or P.branches != Q.branches:
        return
    for T in hom_space(P, Q):
        assert validate_morphism(T).ok


def test_find_isomorphism_distinguishes_by_invariants():
    res = find_isomorphism(rx_shift(QQ), ic_x(QQ))
    assert res.verdict == "distinguished"
    assert res.invariant is not None
    assert is_isomorphic(rx_shift(QQ), ic_x(QQ)) is False


@given(perv_objects(), seeds)
def test_find_isomorphism_is_deterministic(P, seed):
    a = find_isomorphism(P, P, seed=seed)
    b = find_isomorphism(P, P, seed=seed)
    assert a.verdict == b.verdict == "isomorphic"
    assert a.morphism == b.morphism


def test_conjugated_object_found_isomorphic_over_z():
    P = rx_shift(ZZ)
    R = FGModule(ZZ, 1)
    neg = ModuleMap.scalar(R, -1)
    # flip the sign on the first branch
    Q = PervObject(ZZ, P.psi, P.phi, [P.can[0] @ neg, P.can[1]], [neg @ P.var[0], P.var[1]])
    res = find_isomorphism(P, Q, seed=0)
    assert res.verdict == "isomorphic"
    assert morphism_classify(res.morphism).isomorphism


def test_find_isomorphism_never_coerces_unknown():
    # isomorphic but not equal, and no samples allowed: the answer is "unknown", never "no"
    P = rx_shift(QQ)
    Q, _ = _permute_phi(direct_sum(P, P), [1, 0])
    res = find_isomorphism(direct_sum(P, P), Q, trials=0, seed=0)
    assert res.verdict == "unknown"
    assert is_isomorphic(direct_sum(P, P), Q, trials=0) is None
    assert find_isomorphism(direct_sum(P, P), Q, seed=0).verdict == "isomorphic"


def test_kernel_of_t_resolution_is_m_shift():
    F = perv_factorization(t_resolution(Ring.fp(7)))
    assert find_isomorphism(F.kernel, m_shift(Ring.fp(7))).verdict == "isomorphic"
