"""Finitely generated modules in canonical form and the maps between them.

A module over a field is just a dimension.  A module over Z is stored as
``Z^r + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk`` and every ``di >= 2``;
its generators are ordered free first, then torsion by increasing factor.
All internal algorithms treat both cases uniformly through the list of
generator *moduli* (0 for a free generator, ``di`` for a torsion one).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import gcd

from ..errors import InputError
from .matrix import Matrix, block_diag, determinant
from .rings import Ring
from .snf import SmithForm, smith_form


class FGModule:
    def __init__(self, ring: Ring, free_rank: int, invariant_factors=()):
        if not invariant_factors and type(free_rank) is int and free_rank >= 0:
            # fast path: free modules, the common case over a field
            self.ring = ring
            self.free_rank = free_rank
            self.invariant_factors = ()
            self.ngens = free_rank
            self._key_tuple = (ring, free_rank, ())
            return
        invariant_factors = tuple(int(d) for d in invariant_factors)
        if isinstance(free_rank, bool) or int(free_rank) != free_rank or free_rank < 0:
            raise InputError(f"module: free rank must be a nonnegative integer, got {free_rank!r}")
        if ring.is_field and invariant_factors:
            raise InputError("module: modules over a field carry no torsion")
        for d in invariant_factors:
            if d < 2:
                raise InputError(f"module: invariant factor {d} is not >= 2")
        for d, e in zip(invariant_factors, invariant_factors[1:]):
            if e % d:
                raise InputError(f"module: invariant factors {list(invariant_factors)} "
                                 "do not form a divisibility chain")
        self.ring = ring
        self.free_rank = int(free_rank)
        self.invariant_factors = invariant_factors
        self.ngens = self.free_rank + len(invariant_factors)
        self._key_tuple = (ring, self.free_rank, invariant_factors)

    @classmethod
    def vector_space(cls, ring: Ring, dim: int) -> "FGModule":
        return cls(ring, dim)

    @classmethod
    def zero(cls, ring: Ring) -> "FGModule":
        return cls(ring, 0)

    @property
    def dim(self) -> int:
        if not self.ring.is_field:
            raise InputError("module: dim is only defined over a field")
        return self.free_rank

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        return (0,) * self.free_rank + self.invariant_factors

    @cached_property
    def relations(self) -> list[list]:
        """Relation vectors, one per torsion generator."""
        n = self.ngens
        out = []
        for k, d in enumerate(self.invariant_factors):
            v = [0] * n
            v[self.free_rank + k] = d
            out.append(v)
        return out

    def is_zero(self) -> bool:
        return self.ngens == 0

    def order(self):
        """Cardinality of a finite Z-module (None when infinite)."""
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def _key(self):
        return self._key_tuple

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, FGModule) and self._key_tuple == other._key_tuple)

    def __hash__(self) -> int:
        return hash(self._key_tuple)

    def __repr__(self) -> str:
        return f"FGModule({self})"

    def __str__(self) -> str:
        if self.ring.is_field:
            k = "Q" if self.ring.tag == "q" else f"F{self.ring.p}"
            return "0" if self.free_rank == 0 else (k if self.free_rank == 1 else f"{k}^{self.free_rank}")
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def reduce_vector(self, v) -> list:
        red = self.ring.reduce
        return [red(x) if m == 0 else x % m for x, m in zip(v, self.moduli)]


def _reduce_rows(ring: Ring, rows, moduli) -> list[list]:
    red = ring.reduce
    out = []
    for r, m in zip(rows, moduli):
        out.append([x % m for x in r] if m else [red(x) for x in r])
    return out


class ModuleMap:
    """A homomorphism given on canonical generators (matrix columns = images).

    Entries in a torsion row are stored reduced modulo that row's factor, so
    two maps are equal exactly when their matrices are.
    """

    def __init__(self, domain: FGModule, codomain: FGModule, matrix, *, check: bool = True):
        ring = domain.ring
        if codomain.ring != ring:
            raise InputError(f"map: ring mismatch {domain.ring} vs {codomain.ring}")
        if not isinstance(matrix, Matrix):
            matrix = Matrix(ring, matrix, domain.ngens)
        if matrix.ring != ring:
            raise InputError(f"map: matrix over {matrix.ring}, modules over {ring}")
        if matrix.shape != (codomain.ngens, domain.ngens):
            raise InputError(f"map: matrix shape {matrix.shape} does not match "
                             f"{codomain.ngens}x{domain.ngens}")
        if codomain.invariant_factors:
            matrix = Matrix._raw(ring, _reduce_rows(ring, matrix.rows, codomain.moduli), matrix.ncols)
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix
        if check and domain.invariant_factors:
            self._check_well_defined()

    def _check_well_defined(self) -> None:
        F = self.matrix
        for j, d in enumerate(self.domain.moduli):
            if not d:
                continue
            for i, e in enumerate(self.codomain.moduli):
                x = F.rows[i][j]
                if (e == 0 and x != 0) or (e and (d * x) % e):
                    raise InputError(f"map: not well-defined (generator {j} of order {d} "
                                     f"sent to entry {x} in row {i} of modulus {e})")

    @classmethod
    def zero(cls, domain: FGModule, codomain: FGModule) -> "ModuleMap":
        return cls(domain, codomain, Matrix.zeros(domain.ring, codomain.ngens, domain.ngens), check=False)

    @classmethod
    def identity(cls, module: FGModule) -> "ModuleMap":
        return cls(module, module, Matrix.identity(module.ring, module.ngens), check=False)

    @classmethod
    def scalar(cls, module: FGModule, c) -> "ModuleMap":
        return cls(module, module, Matrix.scalar(module.ring, module.ngens, c), check=False)

    @property
    def ring(self) -> Ring:
        return self.domain.ring

    def __eq__(self, other) -> bool:
        return (isinstance(other, ModuleMap) and self.domain == other.domain
                and self.codomain == other.codomain and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.matrix))

    def __repr__(self) -> str:
        return f"ModuleMap({self.domain} -> {self.codomain}, {self.matrix!r})"

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition ``self o other``."""
        if other.codomain != self.domain:
            raise InputError(f"compose: codomain {other.codomain} != domain {self.domain}")
        return ModuleMap(other.domain, self.codomain, self.matrix @ other.matrix, check=False)

    def _same_shape(self, other: "ModuleMap") -> None:
        if self.domain != other.domain or self.codomain != other.codomain:
            raise InputError("map arithmetic: domain/codomain mismatch")

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        self._same_shape(other)
        return ModuleMap(self.domain, self.codomain, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        self._same_shape(other)
        return ModuleMap(self.domain, self.codomain, self.matrix - other.matrix, check=False)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.domain, self.codomain, -self.matrix, check=False)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.domain, self.codomain, self.matrix.scale(c), check=False)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    @cached_property
    def factorization(self) -> "MapFactorization":
        return map_factorization(self)

    @cached_property
    def rank(self) -> int:
        """Rank over a field."""
        self.ring.require_field("rank")
        return field_rank(self.matrix)

    def kernel(self) -> FGModule:
        if self.ring.is_field:
            return FGModule(self.ring, self.domain.ngens - self.rank)
        return self.factorization.kernel

    def image(self) -> FGModule:
        if self.ring.is_field:
            return FGModule(self.ring, self.rank)
        return self.factorization.image

    def cokernel(self) -> FGModule:
        if self.ring.is_field:
            return FGModule(self.ring, self.codomain.ngens - self.rank)
        return self.factorization.cokernel

    def is_injective(self) -> bool:
        return self.kernel().is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel().is_zero()

    def is_isomorphism(self) -> bool:
        if self.domain == self.codomain:
            return _is_automorphism(self)
        return self.is_injective() and self.is_surjective()


def _is_automorphism(f: ModuleMap) -> bool:
    """Endomorphism test without a full factorization.

    Over a field this is full rank.  Over Z an endomorphism preserves the
    torsion submodule, so it is invertible iff the free-free block is
    unimodular and the torsion block is onto; the latter is checked one prime
    at a time on A/pA (Nakayama).
    """
    M = f.domain
    if f.ring.is_field:
        return f.rank == M.ngens
    fr = M.free_rank
    rows = f.matrix.rows
    if fr:
        F = Matrix._raw(f.ring, [list(r[:fr]) for r in rows[:fr]], fr)
        if abs(determinant(F)) != 1:
            return False
    factors = M.invariant_factors
    if not factors:
        return True
    for p in _factorize(factors[-1]):
        J = [fr + k for k, d in enumerate(factors) if d % p == 0]
        sub = Matrix._raw(Ring.fp(p), [[rows[i][j] % p for j in J] for i in J], len(J))
        if field_rank(sub) != len(J):
            return False
    return True



def field_rank(m: Matrix) -> int:
    """Rank over a field.  Over Q the rows are scaled to integers and reduced
    fraction-free, which is much cheaper than Fraction arithmetic."""
    ring = m.ring
    nr, nc = m.shape
    if ring.tag == "fp":
        p = ring.p
        a = [list(r) for r in m.rows if any(r)]
        rank = 0
        for c in range(nc):
            piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            prow = a[rank]
            inv = pow(prow[c], -1, p)
            for i in range(rank + 1, len(a)):
                f = a[i][c]
                if f:
                    f = f * inv % p
                    row = a[i]
                    for k in range(c, nc):
                        if prow[k]:
                            row[k] = (row[k] - f * prow[k]) % p
            rank += 1
            if rank == len(a):
                break
        return rank
    a = []
    for r in m.rows:
        if not any(r):
            continue
        den = 1
        for x in r:
            d = x.denominator
            if d != 1:
                den = den * d // gcd(den, d)
        a.append([int(x * den) for x in r])
    rank = 0
    for c in range(nc):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        prow = a[rank]
        pc = prow[c]
        for i in range(rank + 1, len(a)):
            f = a[i][c]
            if f:
                row = a[i]
                g = gcd(pc, f)
                u, v = pc // g, f // g
                new = [u * x - v * y for x, y in zip(row, prow)]
                h = 0
                for x in new:
                    if x:
                        h = gcd(h, x)
                        if h == 1:
                            break
                if h > 1:
                    new = [x // h for x in new]
                a[i] = new
        rank += 1
        if rank == len(a):
            break
    return rank


def _primitive(row: list) -> list:
    h = 0
    for x in row:
        if x:
            h = gcd(h, x)
            if h == 1:
                return row
    return [x // h for x in row] if h > 1 else row


def field_rref(m: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field: ``(nonzero rows, pivot columns)``.

    Over Q the elimination runs on integer rows (fraction-free) and the rows
    are divided by their pivots only at the end.
    """
    ring = m.ring
    nc = m.ncols
    pivots: list[int] = []
    if ring.tag == "fp":
        p = ring.p
        a = [list(r) for r in m.rows if any(r)]
        for c in range(nc):
            rank = len(pivots)
            piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = pow(a[rank][c], -1, p)
            prow = a[rank] = [x * inv % p for x in a[rank]]
            for i, row in enumerate(a):
                f = row[c]
                if f and i != rank:
                    a[i] = [(x - f * y) % p for x, y in zip(row, prow)]
            pivots.append(c)
        return a[:len(pivots)], pivots
    a = []
    for r in m.rows:
        if not any(r):
            continue
        den = 1
        for x in r:
            d = x.denominator
            if d != 1:
                den = den * d // gcd(den, d)
        a.append([int(x * den) for x in r] if den != 1 else list(r))
    for c in range(nc):
        rank = len(pivots)
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        prow = a[rank]
        pc = prow[c]
        for i, row in enumerate(a):
            f = row[c]
            if f and i != rank:
                g = gcd(pc, f)
                u, v = pc // g, f // g
                a[i] = _primitive([u * x - v * y for x, y in zip(row, prow)])
        pivots.append(c)
    out = []
    for row, c in zip(a, pivots):
        pv = row[c]
        out.append([x // pv if x % pv == 0 else Fraction(x, pv) for x in row])
    return out, pivots


class _Coordinates:
    """Coordinates in a basis that restricts to the identity on ``index``."""

    def __init__(self, index):
        self.index = list(index)

    def canonical_coords(self, w) -> list:
        return [w[i] for i in self.index]


def _field_factorization(f: ModuleMap) -> "MapFactorization":
    ring = f.ring
    M, N = f.domain, f.codomain
    nM, nN = M.ngens, N.ngens
    F = f.matrix
    zero, one = ring.coerce(0), ring.coerce(1)

    # kernel: nullspace basis, identity on the free columns of rref(F)
    R, pcols = field_rref(F)
    free = [j for j in range(nM) if j not in set(pcols)]
    kcols = []
    for j in free:
        v = [zero] * nM
        v[j] = one
        for row, c in zip(R, pcols):
            if row[j]:
                v[c] = -row[j]
        kcols.append(v)
    kernel = FGModule(ring, len(free))
    incl = ModuleMap(kernel, M, Matrix.from_columns(ring, nM, kcols), check=False)

    # image: basis B with B[prows] = identity, from rref of the transpose
    Rt, prows = field_rref(F.transpose())
    r = len(prows)
    image = FGModule(ring, r)
    B = Matrix._raw(ring, [[Rt[k][i] for k in range(r)] for i in range(nN)], r)
    mono = ModuleMap(image, N, B, check=False)
    epi = ModuleMap(M, image, Matrix._raw(ring, [F.rows[i] for i in prows], nM), check=False)

    # cokernel: w -> w[rest] - B[rest] w[prows]; section = unit vectors
    pset = set(prows)
    rest = [i for i in range(nN) if i not in pset]
    coker = FGModule(ring, len(rest))
    proj_rows = []
    for i in rest:
        row = [zero] * nN
        row[i] = one
        for k, pi in enumerate(prows):
            x = B.rows[i][k]
            if x:
                row[pi] = -x
        proj_rows.append(row)
    proj = ModuleMap(N, coker, Matrix._raw(ring, proj_rows, nN), check=False)
    section = Matrix._raw(ring, [[one if i == j else zero for j in rest] for i in range(nN)],
                          len(rest))
    return MapFactorization(f, kernel, incl, image, epi, mono, coker, proj, section,
                            _Coordinates(free), _Coordinates(prows))


# -- presentations ----------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Canonical form of ``R^n / span(relations)``.

    ``to_canon`` (canonical gens x n) sends old coordinates to canonical ones;
    ``from_canon`` (n x canonical gens) picks representatives.
    """

    module: FGModule
    to_canon: Matrix
    from_canon: Matrix


def _canonical_from_smith(ring: Ring, n: int, sf: SmithForm) -> Presentation:
    free = list(range(sf.rank, n))
    tors = [i for i, d in enumerate(sf.diag) if not ring.is_unit(d)]
    sel = free + tors
    module = FGModule(ring, len(free), [sf.diag[i] for i in tors])
    to_rows = _reduce_rows(ring, [sf.U.rows[i] for i in sel], module.moduli)
    to_canon = Matrix._raw(ring, to_rows, n)
    from_canon = Matrix._raw(ring, [[row[i] for i in sel] for row in sf.Uinv.rows], len(sel))
    return Presentation(module, to_canon, from_canon)


def canonical_decomposition(ring: Ring, ngens: int, relations=()) -> Presentation:
    """Canonical form of the module with ``ngens`` generators and the given
    relation vectors (or a relation Matrix whose columns are relations)."""
    if isinstance(relations, Matrix):
        rel = relations
        if rel.ring != ring:
            raise InputError("presentation: ring mismatch")
    else:
        relations = [list(v) for v in relations]
        for v in relations:
            if len(v) != ngens:
                raise InputError(f"presentation: relation of length {len(v)} on {ngens} generators")
        rel = Matrix.from_columns(ring, ngens, [[ring.coerce(x) for x in v] for v in relations])
    if rel.nrows != ngens:
        raise InputError(f"presentation: {rel.nrows} rows for {ngens} generators")
    return _canonical_from_smith(ring, ngens, smith_form(rel))


class SubQuotient:
    """``(span(gens) + span(rels)) / span(rels)`` inside ``R^n``."""

    def __init__(self, ring: Ring, n: int, gens, rels):
        gens = [list(g) for g in gens]
        rels = [list(r) for r in rels]
        self.ring = ring
        self.n = n
        sf = smith_form(Matrix.from_columns(ring, n, gens + rels))
        self._sf = sf
        self.basis = sf.image_basis()
        k = len(self.basis)
        coords = [self._coords(r) for r in rels]
        self.presentation = canonical_decomposition(ring, k, coords)
        self.module = self.presentation.module
        B = Matrix.from_columns(ring, n, self.basis) if k else Matrix.zeros(ring, n, 0)
        self.inclusion_matrix = B @ self.presentation.from_canon

    def _coords(self, w) -> list:
        sf = self._sf
        ring = self.ring
        red = ring.reduce
        out = []
        for i, d in enumerate(sf.diag):
            y = red(sum(a * b for a, b in zip(sf.U.rows[i], w) if a))
            if ring.tag == "z":
                q, r = divmod(y, d)
                if r:
                    raise InputError("subquotient: vector not in the lattice")
                out.append(q)
            else:
                out.append(ring.quo(y, d))
        return out

    def canonical_coords(self, w) -> list:
        """Canonical coordinates of an ambient vector lying in the span."""
        c = self._coords(w)
        P = self.presentation.to_canon
        red = self.ring.reduce
        v = [red(sum(a * b for a, b in zip(r, c) if a)) for r in P.rows]
        return self.module.reduce_vector(v)


@dataclass(frozen=True, eq=False)
class MapFactorization:
    """Kernel, image and cokernel of a module map with their structure maps.

    ``mono @ epi == f``; ``kernel_inclusion`` and ``mono`` are injective,
    ``epi`` and ``projection`` surjective, ``projection @ f == 0``.
    """

    map: ModuleMap
    kernel: FGModule
    kernel_inclusion: ModuleMap
    image: FGModule
    epi: ModuleMap
    mono: ModuleMap
    cokernel: FGModule
    projection: ModuleMap
    section: Matrix
    _ker_sq: object  # coordinate solvers: SubQuotient, or _Coordinates over a field
    _im_sq: object

    def lift_to_kernel(self, g: ModuleMap) -> ModuleMap:
        """The unique ``h`` with ``kernel_inclusion @ h == g`` (g must land in the kernel)."""
        if g.codomain != self.map.domain:
            raise InputError("lift_to_kernel: codomain mismatch")
        cols = [self._ker_sq.canonical_coords(c) for c in g.matrix.columns()]
        return ModuleMap(g.domain, self.kernel,
                         Matrix.from_columns(g.ring, self.kernel.ngens, cols), check=False)

    def lift_to_image(self, g: ModuleMap) -> ModuleMap:
        """The unique ``h`` with ``mono @ h == g`` (g must land in the image)."""
        if g.codomain != self.map.codomain:
            raise InputError("lift_to_image: codomain mismatch")
        cols = [self._im_sq.canonical_coords(c) for c in g.matrix.columns()]
        return ModuleMap(g.domain, self.image,
                         Matrix.from_columns(g.ring, self.image.ngens, cols), check=False)

    def descend_to_cokernel(self, g: ModuleMap) -> ModuleMap:
        """The unique ``h`` with ``h @ projection == g`` (g must kill the image)."""
        if g.domain != self.map.codomain:
            raise InputError("descend_to_cokernel: domain mismatch")
        return ModuleMap(self.cokernel, g.codomain, g.matrix @ self.section, check=False)


def map_factorization(f: ModuleMap) -> MapFactorization:
    ring = f.ring
    if ring.is_field:
        return _field_factorization(f)
    M, N = f.domain, f.codomain
    nM, nN = M.ngens, N.ngens
    F = f.matrix
    rel_N = N.relations
    G = F.hstack(Matrix.from_columns(ring, nN, rel_N)) if rel_N else F
    sfG = smith_form(G)

    kgens = [v[:nM] for v in sfG.kernel_basis()]
    ksq = SubQuotient(ring, nM, kgens, M.relations)
    kernel = ksq.module
    incl = ModuleMap(kernel, M, ksq.inclusion_matrix, check=False)

    isq = SubQuotient(ring, nN, F.columns(), rel_N)
    image = isq.module
    mono = ModuleMap(image, N, isq.inclusion_matrix, check=False)
    epi_cols = [isq.canonical_coords(c) for c in F.columns()]
    epi = ModuleMap(M, image, Matrix.from_columns(ring, image.ngens, epi_cols), check=False)

    coker = _canonical_from_smith(ring, nN, sfG)
    proj = ModuleMap(N, coker.module, coker.to_canon, check=False)
    return MapFactorization(f, kernel, incl, image, epi, mono, coker.module, proj,
                            coker.from_canon, ksq, isq)


# -- sums, ordering, exactness --------------------------------------------


@dataclass(frozen=True)
class DirectSum:
    module: FGModule
    injections: tuple
    projections: tuple


def direct_sum_modules(ring: Ring, modules) -> DirectSum:
    """Canonical direct sum with its injections and projections."""
    modules = list(modules)
    for M in modules:
        if M.ring != ring:
            raise InputError(f"direct sum: module over {M.ring}, expected {ring}")
    n = sum(M.ngens for M in modules)
    offsets = []
    o = 0
    for M in modules:
        offsets.append(o)
        o += M.ngens
    if ring.is_field:
        S = FGModule(ring, n)
        inj, proj = [], []
        for M, o in zip(modules, offsets):
            E = [[1 if i == o + j else 0 for j in range(M.ngens)] for i in range(n)]
            inj.append(ModuleMap(M, S, Matrix._raw(ring, E, M.ngens), check=False))
            Pm = [[1 if j == o + i else 0 for j in range(n)] for i in range(M.ngens)]
            proj.append(ModuleMap(S, M, Matrix._raw(ring, Pm, n), check=False))
        return DirectSum(S, tuple(inj), tuple(proj))
    pres = _diagonal_presentation(ring, [m for M in modules for m in M.moduli])
    S = pres.module
    inj, proj = [], []
    for M, o in zip(modules, offsets):
        cols = [[row[o + j] for row in pres.to_canon.rows] for j in range(M.ngens)]
        inj.append(ModuleMap(M, S, Matrix.from_columns(ring, S.ngens, cols), check=False))
        rows = [pres.from_canon.rows[o + i] for i in range(M.ngens)]
        proj.append(ModuleMap(S, M, Matrix._raw(ring, rows, S.ngens), check=False))
    return DirectSum(S, tuple(inj), tuple(proj))


def _diagonal_presentation(ring: Ring, moduli) -> Presentation:
    """Canonical form of ``+_i R/m_i``; free generators keep their order and an
    already-canonical list yields identity transforms."""
    n = len(moduli)
    free = [i for i, m in enumerate(moduli) if m == 0]
    tor = [i for i, m in enumerate(moduli) if m]
    k = len(tor)
    sf = smith_form(Matrix._raw(ring, [[moduli[i] if a == b else 0 for b in range(k)]
                                       for a, i in enumerate(tor)], k))
    sel = [t for t, d in enumerate(sf.diag) if not ring.is_unit(d)]
    module = FGModule(ring, len(free), [sf.diag[t] for t in sel])
    to_rows = []
    for i in free:
        to_rows.append([1 if j == i else 0 for j in range(n)])
    for t in sel:
        row = [0] * n
        for a, i in enumerate(tor):
            row[i] = sf.U.rows[t][a] % sf.diag[t]
        to_rows.append(row)
    from_rows = [[0] * module.ngens for _ in range(n)]
    for c, i in enumerate(free):
        from_rows[i][c] = 1
    for c, t in enumerate(sel):
        for a, i in enumerate(tor):
            from_rows[i][len(free) + c] = sf.Uinv.rows[a][t]
    return Presentation(module, Matrix._raw(ring, to_rows, n),
                        Matrix._raw(ring, from_rows, module.ngens))


def direct_sum_maps(ring: Ring, src: DirectSum, dst: DirectSum, maps) -> ModuleMap:
    """The block-diagonal map between two canonical direct sums."""
    total = ModuleMap.zero(src.module, dst.module)
    for i, f in enumerate(maps):
        total = total + dst.injections[i] @ f @ src.projections[i]
    return total


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def elementary_divisors(M: FGModule) -> dict[int, int]:
    """Multiplicity of each prime power in the primary decomposition."""
    out: dict[int, int] = {}
    for d in M.invariant_factors:
        for p, e in _factorize(d).items():
            q = p ** e
            out[q] = out.get(q, 0) + 1
    return out


def module_leq(M: FGModule, N: FGModule) -> bool:
    """True iff ``M + P`` is isomorphic to ``N`` for some module ``P``."""
    if M.ring != N.ring:
        raise InputError(f"module_leq: ring mismatch {M.ring} vs {N.ring}")
    if M.free_rank > N.free_rank:
        return False
    em, en = elementary_divisors(M), elementary_divisors(N)
    return all(k <= en.get(q, 0) for q, k in em.items())


def direct_sum_module(M: FGModule, N: FGModule) -> FGModule:
    if M.ring != N.ring:
        raise InputError("direct sum: ring mismatch")
    if M.ring.is_field:
        return FGModule(M.ring, M.free_rank + N.free_rank)
    return _diagonal_presentation(M.ring, M.moduli + N.moduli).module


def exactness_check(seq) -> list[bool]:
    """For composable maps f1, f2, ..., whether im f_k == ker f_{k+1} at each junction."""
    seq = list(seq)
    for f, g in zip(seq, seq[1:]):
        if f.codomain != g.domain:
            raise InputError(f"exactness_check: {f.codomain} does not feed {g.domain}")
        if f.ring != g.ring:
            raise InputError("exactness_check: ring mismatch")
    out = []
    for f, g in zip(seq, seq[1:]):
        if not (g @ f).is_zero():
            out.append(False)
            continue
        B = f.codomain
        gens = f.matrix.columns() + B.relations
        if gens:
            sf = smith_form(Matrix.from_columns(f.ring, B.ngens, gens))
            ok = all(sf.contains(c) for c in g.factorization.kernel_inclusion.matrix.columns())
        else:
            ok = g.kernel().is_zero()
        out.append(ok)
    return out


def eigen_kernel(f: ModuleMap, lam) -> FGModule:
    """``ker(lam * id - f)`` for an endomorphism over a field."""
    f.ring.require_field("eigen_kernel")
    if f.domain != f.codomain:
        raise InputError("eigen_kernel: not an endomorphism")
    return (ModuleMap.scalar(f.domain, lam) - f).kernel()


def block_diagonal_map(ring: Ring, maps) -> Matrix:
    return block_diag(ring, [f.matrix for f in maps])


__all__ = [
    "FGModule", "ModuleMap", "Presentation", "MapFactorization", "DirectSum",
    "canonical_decomposition", "map_factorization", "module_leq", "exactness_check",
    "eigen_kernel", "direct_sum_modules", "direct_sum_maps", "direct_sum_module",
    "elementary_divisors", "field_rank",
]
