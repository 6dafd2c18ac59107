"""Sheaf-theoretic readouts of the diagram model.

Stalk cohomology lives in degrees -1 and 0 only.  At a point of branch ``i``
the stalk is ``Psi_i`` in degree -1; at the origin it is ``ker`` (degree -1)
and ``coker`` (degree 0) of the total ``can: +_i Psi_i -> Phi``.

One isolating function is modelled per stratum: the linear form at the
origin, whose shifted vanishing cycles are ``Phi``, and a stratified Morse
function at a branch point, whose vanishing cycles are ``Psi_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .linalg import FGModule, ModuleMap, direct_sum_maps
from .perv import PervMorphism, PervObject, _check_object

DEGREES = (-1, 0)


@dataclass(frozen=True, order=True)
class Location:
    """The origin (``branch is None``) or a generic point of branch ``branch`` (1-based)."""

    branch: int | None = None

    @classmethod
    def origin(cls) -> "Location":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "Location":
        text = text.strip().lower()
        if text == "origin":
            return cls(None)
        if text.startswith("branch:"):
            try:
                return cls(int(text[7:]))
            except ValueError:
                pass
        raise InputError(f"location: expected 'origin' or 'branch:i', got {text!r}")

    @property
    def is_origin(self) -> bool:
        return self.branch is None

    def check(self, branches: int) -> None:
        if self.branch is not None and not 1 <= self.branch <= branches:
            raise InputError(f"location: branch {self.branch} out of range 1..{branches}")

    def __str__(self) -> str:
        return "origin" if self.branch is None else f"branch:{self.branch}"


def locations(branches: int) -> list[Location]:
    return [Location.origin()] + [Location(i) for i in range(1, branches + 1)]


@dataclass(frozen=True)
class StalkReport:
    location: Location
    groups: dict
    maps: dict | None = None

    def __getitem__(self, degree: int) -> FGModule:
        return self.groups[degree]


def stalk_cohomology(P: PervObject, loc: Location) -> StalkReport:
    loc.check(P.branches)
    if loc.is_origin:
        f = P.total_can.factorization
        return StalkReport(loc, {-1: f.kernel, 0: f.cokernel})
    return StalkReport(loc, {-1: P.psi[loc.branch - 1], 0: FGModule.zero(P.ring)})


def induced_stalk_maps(T: PervMorphism, loc: Location) -> StalkReport:
    """The maps ``T_x^k`` on stalk cohomology, keyed by degree.

    Morphisms are immutable, so the report is cached on ``T``.
    """
    cache = T.__dict__.setdefault("_stalk_maps", {})
    if loc not in cache:
        cache[loc] = _induced_stalk_maps(T, loc)
    return cache[loc]


def _induced_stalk_maps(T: PervMorphism, loc: Location) -> StalkReport:
    P, Q = T.source, T.target
    loc.check(P.branches)
    if not loc.is_origin:
        i = loc.branch - 1
        zero = FGModule.zero(P.ring)
        return StalkReport(loc, {-1: T.a[i].codomain, 0: zero},
                           {-1: T.a[i], 0: ModuleMap.zero(zero, zero)})
    fP = P.total_can.factorization
    fQ = Q.total_can.factorization
    a_total = direct_sum_maps(P.ring, P.total_psi, Q.total_psi, T.a)
    m_minus = fQ.lift_to_kernel(a_total @ fP.kernel_inclusion)
    m_zero = fP.descend_to_cokernel(fQ.projection @ T.b)
    return StalkReport(loc, {-1: fQ.kernel, 0: fQ.cokernel}, {-1: m_minus, 0: m_zero})


@dataclass(frozen=True)
class SupportSet:
    """A closed union of stratum closures of the germ."""

    branch_flags: tuple
    origin_flag: bool

    def __post_init__(self):
        if any(self.branch_flags) and not self.origin_flag:
            raise InputError("support: a branch closure always contains the origin")

    @classmethod
    def closure(cls, branch_flags, origin: bool) -> "SupportSet":
        branch_flags = tuple(bool(x) for x in branch_flags)
        return cls(branch_flags, bool(origin) or any(branch_flags))

    @classmethod
    def empty(cls, branches: int) -> "SupportSet":
        return cls((False,) * branches, False)

    def is_empty(self) -> bool:
        return not self.origin_flag

    def components(self) -> list[tuple[Location, int]]:
        """Irreducible components as ``(generic location, dimension)``."""
        out = [(Location(i + 1), 1) for i, f in enumerate(self.branch_flags) if f]
        if self.origin_flag and not out:
            out.append((Location.origin(), 0))
        return out

    def __str__(self) -> str:
        parts = (["origin"] if self.origin_flag else []) + \
            [f"branch:{i + 1}" for i, f in enumerate(self.branch_flags) if f]
        return "{" + ", ".join(parts) + "}"

    def to_json(self) -> dict:
        return {"origin": self.origin_flag, "branches": [bool(x) for x in self.branch_flags]}


def support(P: PervObject) -> SupportSet:
    flags = tuple(not M.is_zero() for M in P.psi)
    st = stalk_cohomology(P, Location.origin())
    origin = any(flags) or not st[-1].is_zero() or not st[0].is_zero()
    return SupportSet(flags, origin)


@dataclass(frozen=True)
class NearbyVanishing:
    psi_total: FGModule
    psi_monodromy: ModuleMap
    phi: FGModule
    phi_monodromy: ModuleMap


def nearby_and_vanishing(X):
    """On an object: total nearby cycles and vanishing cycles with monodromies.
    On a morphism: ``(a_total, b)`` with ``b`` the vanishing-cycle map."""
    if isinstance(X, PervObject):
        S = X.total_psi
        mu = direct_sum_maps(X.ring, S, S, [X.branch_monodromy(i) for i in range(X.branches)])
        return NearbyVanishing(S.module, mu, X.phi, X.vanishing_monodromy())
    if isinstance(X, PervMorphism):
        a_total = direct_sum_maps(X.ring, X.source.total_psi, X.target.total_psi, X.a)
        return a_total, X.b
    raise InputError("nearby_and_vanishing: expected an object or a morphism")


def isolating_map(T: PervMorphism, loc: Location) -> ModuleMap:
    """Degree-0 map on vanishing cycles of the canonical isolating function at ``loc``."""
    loc.check(T.branches)
    if loc.is_origin:
        return T.b
    return T.a[loc.branch - 1]


@dataclass(frozen=True)
class CharacteristicCycle:
    """Multiplicities of the branch conormals and of the origin's conormal."""

    m_branch: tuple
    m_origin: int

    def __post_init__(self):
        if self.m_origin < 0 or any(m < 0 for m in self.m_branch):
            raise InputError("characteristic cycle: negative multiplicity")

    def __add__(self, other: "CharacteristicCycle") -> "CharacteristicCycle":
        if len(self.m_branch) != len(other.m_branch):
            raise InputError("characteristic cycle: branch count mismatch")
        return CharacteristicCycle(tuple(x + y for x, y in zip(self.m_branch, other.m_branch)),
                                   self.m_origin + other.m_origin)

    def is_zero(self) -> bool:
        return self.m_origin == 0 and not any(self.m_branch)

    def underlying_set(self) -> SupportSet:
        return SupportSet.closure([m > 0 for m in self.m_branch], self.m_origin > 0)

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.m_branch)) + f"; {self.m_origin})"

    def to_json(self) -> dict:
        return {"branches": list(self.m_branch), "origin": self.m_origin}


def characteristic_cycle(P: PervObject) -> CharacteristicCycle:
    P.ring.require_field("characteristic_cycle")
    return CharacteristicCycle(tuple(M.dim for M in P.psi), P.phi.dim)


def characteristic_cycle_or_none(P: PervObject):
    return characteristic_cycle(P) if P.ring.is_field else None


def invariant_summary(P: PervObject) -> dict:
    """Isomorphism invariants used to tell objects apart."""
    o = stalk_cohomology(P, Location.origin())
    out = {
        "psi": P.psi,
        "phi": P.phi,
        "stalk_origin": (o[-1], o[0]),
    }
    for name, maps in (("can", P.can), ("var", P.var)):
        out[f"{name}_kernels"] = tuple(f.kernel() for f in maps)
        out[f"{name}_images"] = tuple(f.image() for f in maps)
    out["var_can_images"] = tuple((v @ c).image() for c, v in zip(P.can, P.var))
    out["can_var_images"] = tuple((c @ v).image() for c, v in zip(P.can, P.var))
    return out


def euler_defect(P: PervObject) -> int:
    """dim ker(can) - dim Psi_total + dim Phi - dim coker(can); zero over a field."""
    P.ring.require_field("euler_defect")
    o = stalk_cohomology(P, Location.origin())
    return o[-1].dim - sum(M.dim for M in P.psi) + P.phi.dim - o[0].dim


def require_valid(P: PervObject) -> None:
    _check_object(P, "functor")
