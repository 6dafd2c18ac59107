"""Seeded random objects and morphisms."""

from __future__ import annotations

from math import gcd

from .linalg import FGModule, Matrix, ModuleMap, Ring
from .linalg.modules import _diagonal_presentation
from .perv import PervMorphism, PervObject, hom_space, random_combination, validate_object
from .rng import SplitMix64

MAX_REJECTIONS = 32
TORSION_ORDERS = (2, 3, 4, 6, 8, 9)


def random_module(ring: Ring, max_dim: int, rng: SplitMix64) -> FGModule:
    n = rng.randint(0, max_dim)
    if ring.is_field:
        return FGModule(ring, n)
    moduli = [0 if rng.chance(2, 3) else rng.choice(TORSION_ORDERS) for _ in range(n)]
    return _diagonal_presentation(ring, moduli).module


def random_map(M: FGModule, N: FGModule, rng: SplitMix64, density=(2, 3), bound: int = 2) -> ModuleMap:
    """A random well-defined map with small entries."""
    ring = M.ring
    rows = []
    for ei in N.moduli:
        row = []
        for dj in M.moduli:
            x = rng.randint(-bound, bound) if rng.chance(*density) else 0
            if dj and ei == 0:
                x = 0
            elif dj:
                x *= ei // gcd(ei, dj)
            row.append(ring.coerce(x) if ei == 0 else x % ei)
        rows.append(row)
    return ModuleMap(M, N, Matrix._raw(ring, rows, M.ngens))


def _branch_ok(M: FGModule, c: ModuleMap, v: ModuleMap) -> bool:
    return (ModuleMap.identity(M) + v @ c).is_isomorphism()


def random_object(ring: Ring, r: int, max_dim: int, seed: int) -> PervObject:
    """Random dims and can; var resampled until A1 and A2 hold, else var = 0.

    Each var_i is first resampled on its own until that branch satisfies A1,
    so only A2 couples the branches in the outer rejection loop.
    """
    rng = SplitMix64(seed)
    psi = [random_module(ring, max_dim, rng) for _ in range(r)]
    phi = random_module(ring, max_dim, rng)
    can = [random_map(M, phi, rng) for M in psi]
    for _ in range(MAX_REJECTIONS):
        var = []
        for M, c in zip(psi, can):
            for _ in range(MAX_REJECTIONS):
                v = random_map(phi, M, rng, density=(1, 2), bound=1)
                if _branch_ok(M, c, v):
                    break
            else:
                v = ModuleMap.zero(phi, M)
            var.append(v)
        P = PervObject(ring, psi, phi, can, var)
        if validate_object(P).ok:
            return P
    return PervObject(ring, psi, phi, can, [ModuleMap.zero(phi, M) for M in psi])


def random_morphism(P: PervObject, Q: PervObject, seed: int, basis=None) -> PervMorphism:
    """Random integer combination of a Hom(P, Q) basis (generating set over Z)."""
    if basis is None:
        basis = hom_space(P, Q)
    return random_combination(basis, P, Q, SplitMix64(seed))


def random_endo(P: PervObject, seed: int) -> PervMorphism:
    return random_morphism(P, P, seed)
