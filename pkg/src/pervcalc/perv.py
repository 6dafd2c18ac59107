"""Perverse sheaves on an r-branch curve germ as linear-algebra diagrams.

An object is ``(Psi_1..Psi_r, Phi, can_i: Psi_i -> Phi, var_i: Phi -> Psi_i)``
subject to

* A1: ``id + var_i o can_i`` is an automorphism of each ``Psi_i``;
* A2: ``id + sum_i can_i o var_i`` is an automorphism of ``Phi``.

``r == 1`` is the disk, ``r == 2`` the node.  Morphisms are branchwise maps
``a_i`` together with ``b`` on ``Phi`` commuting with every ``can`` and ``var``.
Kernels, images and cokernels are computed componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import InputError
from .linalg import FGModule, Matrix, ModuleMap, Ring, direct_sum_maps, direct_sum_modules
from .linalg.homsolve import Term, solve_hom_constraints
from .rng import SplitMix64

DEFAULT_TRIALS = 64


def _as_map(dom: FGModule, cod: FGModule, m, what: str) -> ModuleMap:
    if isinstance(m, ModuleMap):
        if m.domain != dom or m.codomain != cod:
            raise InputError(f"{what}: expected a map {dom} -> {cod}, got {m.domain} -> {m.codomain}")
        return m
    try:
        return ModuleMap(dom, cod, m if isinstance(m, Matrix) else Matrix(dom.ring, m, dom.ngens))
    except InputError as e:
        raise InputError(f"{what}: {e}") from None


class PervObject:
    """An immutable diagram; structural problems raise, axioms are checked by
    :func:`validate_object`."""

    def __init__(self, ring: Ring, psi, phi: FGModule, can, var):
        psi = tuple(psi)
        can = tuple(can)
        var = tuple(var)
        r = len(psi)
        if r < 1:
            raise InputError("object: at least one branch is required")
        if len(can) != r or len(var) != r:
            raise InputError(f"object: {r} branches but {len(can)} can maps and {len(var)} var maps")
        for k, M in enumerate(psi + (phi,)):
            if not isinstance(M, FGModule) or M.ring != ring:
                raise InputError(f"object: module {k} is not a module over {ring}")
        self.ring = ring
        self.psi = psi
        self.phi = phi
        self.can = tuple(_as_map(psi[i], phi, can[i], f"can[{i + 1}]") for i in range(r))
        self.var = tuple(_as_map(phi, psi[i], var[i], f"var[{i + 1}]") for i in range(r))

    @classmethod
    def zero(cls, ring: Ring, branches: int) -> "PervObject":
        Z = FGModule.zero(ring)
        z = ModuleMap.zero(Z, Z)
        return cls(ring, [Z] * branches, Z, [z] * branches, [z] * branches)

    @property
    def branches(self) -> int:
        return len(self.psi)

    def is_zero(self) -> bool:
        return self.phi.is_zero() and all(M.is_zero() for M in self.psi)

    def _key(self):
        return (self.ring, self.psi, self.phi, self.can, self.var)

    def __eq__(self, other) -> bool:
        return isinstance(other, PervObject) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        psi = ", ".join(str(M) for M in self.psi)
        return f"PervObject(psi=[{psi}], phi={self.phi})"

    def branch_monodromy(self, i: int) -> ModuleMap:
        """``id + var_i o can_i`` on ``Psi_i`` (0-based branch index)."""
        return ModuleMap.identity(self.psi[i]) + self.var[i] @ self.can[i]

    def vanishing_monodromy(self) -> ModuleMap:
        mu = ModuleMap.identity(self.phi)
        for c, v in zip(self.can, self.var):
            mu = mu + c @ v
        return mu

    @cached_property
    def total_psi(self):
        return direct_sum_modules(self.ring, self.psi)

    @cached_property
    def total_can(self) -> ModuleMap:
        """``sum_i can_i``: the direct sum of the Psi_i to Phi."""
        S = self.total_psi
        out = ModuleMap.zero(S.module, self.phi)
        for c, p in zip(self.can, S.projections):
            out = out + c @ p
        return out


@dataclass(frozen=True)
class Violation:
    axiom: str
    branch: int | None
    detail: str

    def __str__(self) -> str:
        where = f" (branch {self.branch})" if self.branch is not None else ""
        return f"{self.axiom}{where}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_object(P: PervObject) -> ValidationReport:
    cached = P.__dict__.get("_validation")
    if cached is not None:
        return cached
    out = []
    for i in range(P.branches):
        if not P.branch_monodromy(i).is_isomorphism():
            out.append(Violation("A1", i + 1, "id + var o can is not an automorphism of Psi"))
    if not P.vanishing_monodromy().is_isomorphism():
        out.append(Violation("A2", None, "id + sum can o var is not an automorphism of Phi"))
    rep = ValidationReport(tuple(out))
    P.__dict__["_validation"] = rep
    return rep


def _check_object(P: PervObject, what: str) -> None:
    rep = validate_object(P)
    if not rep.ok:
        raise InputError(f"{what}: invalid object: {rep.violations[0]}")


class PervMorphism:
    def __init__(self, source: PervObject, target: PervObject, a, b):
        if source.ring != target.ring:
            raise InputError(f"morphism: ring mismatch {source.ring} vs {target.ring}")
        if source.branches != target.branches:
            raise InputError(f"morphism: {source.branches} vs {target.branches} branches")
        a = tuple(a)
        if len(a) != source.branches:
            raise InputError(f"morphism: {len(a)} branch maps for {source.branches} branches")
        self.source = source
        self.target = target
        self.a = tuple(_as_map(source.psi[i], target.psi[i], a[i], f"a[{i + 1}]")
                       for i in range(source.branches))
        self.b = _as_map(source.phi, target.phi, b, "b")

    @property
    def ring(self) -> Ring:
        return self.source.ring

    @property
    def branches(self) -> int:
        return self.source.branches

    @classmethod
    def identity(cls, P: PervObject) -> "PervMorphism":
        return cls(P, P, [ModuleMap.identity(M) for M in P.psi], ModuleMap.identity(P.phi))

    @classmethod
    def zero(cls, P: PervObject, Q: PervObject) -> "PervMorphism":
        return cls(P, Q, [ModuleMap.zero(M, N) for M, N in zip(P.psi, Q.psi)],
                   ModuleMap.zero(P.phi, Q.phi))

    @classmethod
    def scalar(cls, P: PervObject, c) -> "PervMorphism":
        return cls(P, P, [ModuleMap.scalar(M, c) for M in P.psi], ModuleMap.scalar(P.phi, c))

    def _key(self):
        return (self.source, self.target, self.a, self.b)

    def __eq__(self, other) -> bool:
        return isinstance(other, PervMorphism) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"PervMorphism({self.source!r} -> {self.target!r})"

    def _same(self, other: "PervMorphism") -> None:
        if self.source != other.source or self.target != other.target:
            raise InputError("morphism arithmetic: source/target mismatch")

    def __add__(self, other: "PervMorphism") -> "PervMorphism":
        self._same(other)
        return PervMorphism(self.source, self.target,
                            [x + y for x, y in zip(self.a, other.a)], self.b + other.b)

    def __sub__(self, other: "PervMorphism") -> "PervMorphism":
        self._same(other)
        return PervMorphism(self.source, self.target,
                            [x - y for x, y in zip(self.a, other.a)], self.b - other.b)

    def scale(self, c) -> "PervMorphism":
        return PervMorphism(self.source, self.target, [x.scale(c) for x in self.a], self.b.scale(c))

    def __matmul__(self, other: "PervMorphism") -> "PervMorphism":
        """``self o other``."""
        return compose(other, self)

    def is_zero(self) -> bool:
        return self.b.is_zero() and all(x.is_zero() for x in self.a)


def validate_morphism(T: PervMorphism) -> ValidationReport:
    cached = T.__dict__.get("_validation")
    if cached is not None:
        return cached
    out = []
    for i in range(T.branches):
        if T.b @ T.source.can[i] != T.target.can[i] @ T.a[i]:
            out.append(Violation("commutes-with-can", i + 1, "b o can != can' o a"))
        if T.a[i] @ T.source.var[i] != T.target.var[i] @ T.b:
            out.append(Violation("commutes-with-var", i + 1, "a o var != var' o b"))
    rep = ValidationReport(tuple(out))
    T.__dict__["_validation"] = rep
    return rep


def _check_morphism(T: PervMorphism, what: str) -> None:
    _check_object(T.source, what)
    _check_object(T.target, what)
    rep = validate_morphism(T)
    if not rep.ok:
        raise InputError(f"{what}: invalid morphism: {rep.violations[0]}")


def compose(T: PervMorphism, U: PervMorphism) -> PervMorphism:
    """``U o T`` for ``T: P -> Q`` and ``U: Q -> S``."""
    if T.target != U.source:
        raise InputError("compose: target of the first morphism is not the source of the second")
    return PervMorphism(T.source, U.target, [u @ t for t, u in zip(T.a, U.a)], U.b @ T.b)


@dataclass(frozen=True, eq=False)
class PervFactorization:
    """``0 -> K -> P -> I -> 0`` and ``0 -> I -> Q -> C -> 0`` with ``T = beta o alpha``."""

    morphism: PervMorphism
    kernel: PervObject
    image: PervObject
    cokernel: PervObject
    iota: PervMorphism
    alpha: PervMorphism
    beta: PervMorphism
    pi: PervMorphism
    component_factorizations: tuple = field(repr=False, default=())


def perv_factorization(T: PervMorphism, *, check: bool = True) -> PervFactorization:
    if check:
        _check_morphism(T, "perv_factorization")
    cached = T.__dict__.get("_factorization")
    if cached is not None:
        return cached
    P, Q = T.source, T.target
    ring = T.ring
    r = T.branches
    fa = [x.factorization for x in T.a]
    fb = T.b.factorization

    # kernel: restrict can/var to the kernels
    k_can = [fb.lift_to_kernel(P.can[i] @ fa[i].kernel_inclusion) for i in range(r)]
    k_var = [fa[i].lift_to_kernel(P.var[i] @ fb.kernel_inclusion) for i in range(r)]
    K = PervObject(ring, [f.kernel for f in fa], fb.kernel, k_can, k_var)

    i_can = [fb.lift_to_image(Q.can[i] @ fa[i].mono) for i in range(r)]
    i_var = [fa[i].lift_to_image(Q.var[i] @ fb.mono) for i in range(r)]
    I = PervObject(ring, [f.image for f in fa], fb.image, i_can, i_var)

    c_can = [fa[i].descend_to_cokernel(fb.projection @ Q.can[i]) for i in range(r)]
    c_var = [fb.descend_to_cokernel(fa[i].projection @ Q.var[i]) for i in range(r)]
    C = PervObject(ring, [f.cokernel for f in fa], fb.cokernel, c_can, c_var)

    iota = PervMorphism(K, P, [f.kernel_inclusion for f in fa], fb.kernel_inclusion)
    alpha = PervMorphism(P, I, [f.epi for f in fa], fb.epi)
    beta = PervMorphism(I, Q, [f.mono for f in fa], fb.mono)
    pi = PervMorphism(Q, C, [f.projection for f in fa], fb.projection)
    F = PervFactorization(T, K, I, C, iota, alpha, beta, pi, tuple(fa) + (fb,))
    T.__dict__["_factorization"] = F
    return F


def kernel(T: PervMorphism) -> PervObject:
    return perv_factorization(T).kernel


def image(T: PervMorphism) -> PervObject:
    return perv_factorization(T).image


def cokernel(T: PervMorphism) -> PervObject:
    return perv_factorization(T).cokernel


def _sum_objects(P: PervObject, Q: PervObject):
    if P.ring != Q.ring:
        raise InputError(f"direct_sum: ring mismatch {P.ring} vs {Q.ring}")
    if P.branches != Q.branches:
        raise InputError(f"direct_sum: {P.branches} vs {Q.branches} branches")
    ring = P.ring
    psums = [direct_sum_modules(ring, [M, N]) for M, N in zip(P.psi, Q.psi)]
    fsum = direct_sum_modules(ring, [P.phi, Q.phi])
    can = [direct_sum_maps(ring, psums[i], fsum, [P.can[i], Q.can[i]]) for i in range(P.branches)]
    var = [direct_sum_maps(ring, fsum, psums[i], [P.var[i], Q.var[i]]) for i in range(P.branches)]
    S = PervObject(ring, [s.module for s in psums], fsum.module, can, var)
    return S, psums, fsum


def direct_sum(X, Y):
    """Direct sum of two objects or of two morphisms, re-canonicalised."""
    if isinstance(X, PervObject) and isinstance(Y, PervObject):
        return _sum_objects(X, Y)[0]
    if isinstance(X, PervMorphism) and isinstance(Y, PervMorphism):
        ring = X.ring
        S, ps, fs = _sum_objects(X.source, Y.source)
        S2, ps2, fs2 = _sum_objects(X.target, Y.target)
        a = [direct_sum_maps(ring, ps[i], ps2[i], [X.a[i], Y.a[i]]) for i in range(X.branches)]
        b = direct_sum_maps(ring, fs, fs2, [X.b, Y.b])
        return PervMorphism(S, S2, a, b)
    raise InputError("direct_sum: expected two objects or two morphisms")


def direct_sum_structure(P: PervObject, Q: PervObject):
    """``(P + Q, inj_P, inj_Q, proj_P, proj_Q)`` as morphisms."""
    S, ps, fs = _sum_objects(P, Q)
    injP = PervMorphism(P, S, [s.injections[0] for s in ps], fs.injections[0])
    injQ = PervMorphism(Q, S, [s.injections[1] for s in ps], fs.injections[1])
    prjP = PervMorphism(S, P, [s.projections[0] for s in ps], fs.projections[0])
    prjQ = PervMorphism(S, Q, [s.projections[1] for s in ps], fs.projections[1])
    return S, injP, injQ, prjP, prjQ


def hom_space(P: PervObject, Q: PervObject) -> list[PervMorphism]:
    """A basis of Hom(P, Q) over a field, a generating set over Z."""
    if P.ring != Q.ring:
        raise InputError(f"hom_space: ring mismatch {P.ring} vs {Q.ring}")
    if P.branches != Q.branches:
        raise InputError(f"hom_space: {P.branches} vs {Q.branches} branches")
    r = P.branches
    unknowns = [(P.psi[i], Q.psi[i]) for i in range(r)] + [(P.phi, Q.phi)]
    eqs = []
    for i in range(r):
        # b o can_i - can'_i o a_i = 0 ; a_i o var_i - var'_i o b = 0
        eqs.append([Term(r, right=P.can[i]), Term(i, left=Q.can[i], coeff=-1)])
        eqs.append([Term(i, right=P.var[i]), Term(r, left=Q.var[i], coeff=-1)])
    sols = solve_hom_constraints(P.ring, unknowns, eqs)
    return [PervMorphism(P, Q, s[:r], s[r]) for s in sols]


def random_combination(basis, P: PervObject, Q: PervObject, rng: SplitMix64,
                       lo: int = -3, hi: int = 3) -> PervMorphism:
    coeffs = [rng.randint(lo, hi) for _ in basis]
    terms = [(c, B) for c, B in zip(coeffs, basis) if c]
    red = P.ring.reduce

    def combine(dom, cod, pick):
        rows = [[0] * dom.ngens for _ in range(cod.ngens)]
        for c, B in terms:
            for row, brow in zip(rows, pick(B).matrix.rows):
                for j, x in enumerate(brow):
                    if x:
                        row[j] += c * x
        return ModuleMap(dom, cod, Matrix._raw(P.ring, [[red(x) for x in row] for row in rows],
                                               dom.ngens), check=False)

    a = [combine(P.psi[i], Q.psi[i], lambda B, i=i: B.a[i]) for i in range(P.branches)]
    return PervMorphism(P, Q, a, combine(P.phi, Q.phi, lambda B: B.b))


@dataclass(frozen=True)
class MorphismFlags:
    injective: bool
    surjective: bool
    zero: bool
    isomorphism: bool


def morphism_classify(T: PervMorphism) -> MorphismFlags:
    """Flags read off the componentwise kernel, image and cokernel."""
    _check_morphism(T, "morphism_classify")
    comps = list(T.a) + [T.b]
    inj = all(f.kernel().is_zero() for f in comps)
    sur = all(f.cokernel().is_zero() for f in comps)
    zero = all(f.image().is_zero() for f in comps)
    return MorphismFlags(inj, sur, zero, inj and sur)


@dataclass(frozen=True)
class IsoResult:
    """Outcome of :func:`find_isomorphism`.

    ``verdict`` is ``"isomorphic"``, ``"distinguished"`` or ``"unknown"``.
    """

    verdict: str
    morphism: PervMorphism | None = None
    invariant: str | None = None
    values: tuple | None = None
    trials_used: int = 0
    invariants_only: bool = False


def _invariants(P: PervObject):
    from .functors import characteristic_cycle_or_none, invariant_summary
    return invariant_summary(P), characteristic_cycle_or_none(P)


def find_isomorphism(P: PervObject, Q: PervObject, trials: int = DEFAULT_TRIALS,
                     seed: int = 0) -> IsoResult:
    if P.ring != Q.ring:
        raise InputError(f"find_isomorphism: ring mismatch {P.ring} vs {Q.ring}")
    if P.branches != Q.branches:
        return IsoResult("distinguished", invariant="branches", values=(P.branches, Q.branches))
    field_ring = P.ring.is_field
    (sp, cp), (sq, cq) = _invariants(P), _invariants(Q)
    for name in sp:
        if sp[name] != sq[name]:
            return IsoResult("distinguished", invariant=name, values=(sp[name], sq[name]),
                             invariants_only=not field_ring)
    if cp != cq:
        return IsoResult("distinguished", invariant="characteristic_cycle", values=(cp, cq))
    if P == Q:
        return IsoResult("isomorphic", PervMorphism.identity(P), trials_used=1,
                         invariants_only=not field_ring)
    # equal invariants include equal component modules, so each sampled
    # component map is square and the cheap automorphism test applies
    basis = hom_space(P, Q)
    rng = SplitMix64(seed)
    for t in range(1, trials + 1):
        T = random_combination(basis, P, Q, rng)
        if T.b.is_isomorphism() and all(x.is_isomorphism() for x in T.a):
            return IsoResult("isomorphic", T, trials_used=t)
    return IsoResult("unknown", trials_used=trials)


def is_isomorphic(P: PervObject, Q: PervObject, trials: int = DEFAULT_TRIALS, seed: int = 0) -> bool | None:
    res = find_isomorphism(P, Q, trials, seed)
    return {"isomorphic": True, "distinguished": False}.get(res.verdict)
