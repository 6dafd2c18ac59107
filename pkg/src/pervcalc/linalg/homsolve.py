"""Solve linear systems whose unknowns are module maps.

An equation is a list of :class:`Term` objects whose sum must vanish; each
term is ``coeff * left o X_k o right`` for an unknown ``X_k``.  Over a field
the result is a basis of the solution space.  Over Z it is a generating set
of the solution lattice, with the torsion congruences (well-definedness of
every unknown, equality modulo the target's relations) imposed through
slack variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ..errors import InputError
from .matrix import Matrix
from .modules import FGModule, ModuleMap
from .rings import Ring


@dataclass(frozen=True)
class Term:
    unknown: int
    left: ModuleMap | None = None
    right: ModuleMap | None = None
    coeff: int = 1


def _term_ends(term: Term, shapes) -> tuple[FGModule, FGModule]:
    dom, cod = shapes[term.unknown]
    if term.right is not None:
        if term.right.codomain != dom:
            raise InputError(f"hom constraints: right factor does not feed unknown {term.unknown}")
        dom = term.right.domain
    if term.left is not None:
        if term.left.domain != cod:
            raise InputError(f"hom constraints: unknown {term.unknown} does not feed left factor")
        cod = term.left.codomain
    return dom, cod


def _equation_rows(ring: Ring, eq, shapes, offsets):
    """Sparse rows ``{var: coeff}`` for each entry of the equation, with the row modulus."""
    if not eq:
        return []
    ends = {_term_ends(t, shapes) for t in eq}
    if len(ends) != 1:
        raise InputError("hom constraints: terms of one equation have different shapes")
    (A, B), = ends
    rows = [[{} for _ in range(A.ngens)] for _ in range(B.ngens)]
    for t in eq:
        dom, cod = shapes[t.unknown]
        ncols_x = dom.ngens
        base = offsets[t.unknown]
        if t.left is None:
            lcols = [[(k, 1)] for k in range(cod.ngens)]
        else:
            L = t.left.matrix.rows
            lcols = [[(s, L[s][k]) for s in range(B.ngens) if L[s][k]] for k in range(cod.ngens)]
        if t.right is None:
            rrows = [[(l, 1)] for l in range(dom.ngens)]
        else:
            R = t.right.matrix.rows
            rrows = [[(u, x) for u, x in enumerate(R[l]) if x] for l in range(dom.ngens)]
        c = t.coeff
        for k, lc in enumerate(lcols):
            for l, rr in enumerate(rrows):
                var = base + k * ncols_x + l
                for s, ls in lc:
                    for u, ru in rr:
                        row = rows[s][u]
                        row[var] = row.get(var, 0) + c * ls * ru
    out = []
    red = ring.reduce
    for s in range(B.ngens):
        for u in range(A.ngens):
            row = {v: red(x) for v, x in rows[s][u].items()}
            row = {v: x for v, x in row.items() if x}
            out.append((row, B.moduli[s]))
    return out


def _content_reduce(row: dict) -> dict:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return row
    return {w: x // g for w, x in row.items()}


def _eliminate(row: dict, prow: dict, p: int) -> dict:
    """``row`` with its ``p`` entry cleared by the integer pivot row ``prow``."""
    c, pv = row[p], prow[p]
    g = gcd(c, pv)
    m, k = pv // g, c // g
    out = {w: m * x for w, x in row.items()}
    for w, x in prow.items():
        y = out.get(w, 0) - k * x
        if y:
            out[w] = y
        else:
            out.pop(w, None)
    return _content_reduce(out)


def _rational_nullspace(rows, nvars: int) -> list[dict]:
    """Nullspace basis over Q, computed fraction-free.

    Each pivot row is kept as a primitive integer vector; dividing by the
    pivot at the very end recovers the reduced row echelon form.  Basis
    vectors are returned as primitive integer vectors (each is the usual
    free-variable basis vector up to a positive scalar).
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        den = 1
        for x in row.values():
            if type(x) is Fraction:
                den = den * x.denominator // gcd(den, x.denominator)
        row = {w: int(x * den) for w, x in row.items()}
        for v in [v for v in row if v in pivots]:
            if v in row:
                row = _eliminate(row, pivots[v], v)
        if not row:
            continue
        row = _content_reduce(row)
        p = min(row)
        for q, prow in pivots.items():
            if p in prow:
                pivots[q] = _eliminate(prow, row, p)
        pivots[p] = row
    basis = []
    for f in range(nvars):
        if f in pivots:
            continue
        # the basis vector with a 1 in the free slot, scaled to a primitive
        # integer vector so downstream arithmetic stays in Z
        vec = {f: Fraction(1)}
        for p, prow in pivots.items():
            c = prow.get(f)
            if c:
                vec[p] = Fraction(-c, prow[p])
        den = 1
        for x in vec.values():
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(_content_reduce({w: int(x * den) for w, x in vec.items()}))
    return basis


def _field_nullspace(ring: Ring, rows, nvars: int) -> list[dict]:
    if ring.tag == "q":
        return _rational_nullspace(rows, nvars)
    red = ring.reduce
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        for v in [v for v in row if v in pivots]:
            c = row.get(v)
            if not c:
                continue
            for w, x in pivots[v].items():
                y = red(row.get(w, 0) - c * x)
                if y:
                    row[w] = y
                else:
                    row.pop(w, None)
        if not row:
            continue
        p = min(row)
        inv = ring.inverse(row[p])
        row = {w: red(x * inv) for w, x in row.items()}
        for q, prow in pivots.items():
            c = prow.get(p)
            if c:
                for w, x in row.items():
                    y = red(prow.get(w, 0) - c * x)
                    if y:
                        prow[w] = y
                    else:
                        prow.pop(w, None)
        pivots[p] = row
    basis = []
    for f in range(nvars):
        if f in pivots:
            continue
        vec = {f: ring.coerce(1)}
        for p, prow in pivots.items():
            c = prow.get(f)
            if c:
                vec[p] = red(-c)
        basis.append(vec)
    return basis


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _axpy(u: dict, v: dict, a: int, b: int) -> dict:
    """a*u + b*v on sparse integer vectors."""
    out = {}
    for k, x in u.items():
        if a:
            out[k] = a * x
    for k, x in v.items():
        y = out.get(k, 0) + b * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


_GROWTH_LIMIT = 1 << 40


def _integer_kernel(rows, nvars: int) -> list[dict]:
    """Lattice basis of {x in Z^n : row . x == 0 for all rows}."""
    basis = [{i: 1} for i in range(nvars)]
    for row in rows:
        vals = []
        for col in basis:
            vals.append(sum(c * col.get(v, 0) for v, c in row.items()) if len(col) > len(row)
                        else sum(x * row.get(v, 0) for v, x in col.items()))
        live = [i for i, x in enumerate(vals) if x]
        if not live:
            continue
        # Euclidean column reduction: subtract multiples of the column with the
        # smallest value until a single nonzero value (the gcd) remains; this
        # keeps entries far smaller than extended-gcd combinations do
        while len(live) > 1:
            p = min(live, key=lambda i: (abs(vals[i]), len(basis[i])))
            pv, pc = vals[p], basis[p]
            nxt = [p]
            for i in live:
                if i == p:
                    continue
                q = vals[i] // pv
                basis[i] = _axpy(basis[i], pc, 1, -q)
                vals[i] -= q * pv
                if vals[i]:
                    nxt.append(i)
            live = nxt
        basis[live[0]] = None  # the column carrying the gcd leaves the kernel
        basis = [c for c in basis if c is not None]
        if any(abs(x) > _GROWTH_LIMIT for c in basis for x in c.values()):
            basis = _hermite_basis(basis, nvars, [0] * nvars)
    return basis


def _hermite_basis(vecs, n: int, mods) -> list[dict]:
    """Row Hermite normal form of the lattice spanned by ``vecs`` together
    with ``mods[k] * e_k`` for every coordinate with a nonzero modulus.

    The lattice kernel above is correct but can have huge entries; the HNF
    is canonical and keeps every entry below its column pivot, or below the
    coordinate's modulus.
    """
    def red(v):
        return [x % m if m else x for x, m in zip(v, mods)]

    rows = [red([v.get(k, 0) for k in range(n)]) for v in vecs]
    rows = [r for r in rows if any(r)]
    done: list[list] = []
    for col in range(n):
        cands = [r for r in rows if r[col]]
        if mods[col]:
            e = [0] * n
            e[col] = mods[col]
            cands.append(e)
        if not cands:
            continue
        rest = [r for r in rows if not r[col]]
        # Euclidean reduction on the pivot column keeps entries small
        while len(cands) > 1:
            cands.sort(key=lambda r: abs(r[col]))
            piv = cands[0]
            pv = piv[col]
            nxt = [piv]
            for r in cands[1:]:
                q = r[col] // pv
                r = red([x - q * y for x, y in zip(r, piv)])
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            cands = nxt
        piv = cands[0]
        if piv[col] < 0:
            piv = red([-x for x in piv])
        pv = piv[col]
        for d in done:
            q = d[col] // pv
            if q:
                d[:] = red([x - q * y for x, y in zip(d, piv)])
        done.append(piv)
        rows = rest
    return [{k: x for k, x in enumerate(r) if x} for r in done]


def solve_hom_constraints(ring: Ring, unknowns, equations) -> list[tuple[ModuleMap, ...]]:
    """Solutions of a homogeneous linear system in unknown module maps.

    ``unknowns`` is a list of ``(domain, codomain)`` pairs; ``equations`` a
    list of lists of :class:`Term`.  Returns tuples with one map per unknown.
    """
    shapes = [(d, c) for d, c in unknowns]
    for d, c in shapes:
        if d.ring != ring or c.ring != ring:
            raise InputError("hom constraints: ring mismatch")
    offsets = []
    n = 0
    for d, c in shapes:
        offsets.append(n)
        n += d.ngens * c.ngens
    for eq in equations:
        for t in eq:
            if not 0 <= t.unknown < len(shapes):
                raise InputError(f"hom constraints: no unknown {t.unknown}")
    rows = []
    for eq in equations:
        rows.extend(_equation_rows(ring, eq, shapes, offsets))

    if ring.is_field:
        vecs = _field_nullspace(ring, [r for r, _ in rows], n)
    else:
        # slack variables encode congruences modulo torsion factors
        int_rows = []
        nv = n
        for row, e in rows:
            if e:
                row = dict(row)
                row[nv] = e
                nv += 1
            if row:
                int_rows.append(row)
        for k, (d, c) in enumerate(shapes):
            for j, dj in enumerate(d.moduli):
                if not dj:
                    continue
                for i, ei in enumerate(c.moduli):
                    var = offsets[k] + i * d.ngens + j
                    if ei == 0:
                        int_rows.append({var: 1})
                    elif dj % ei:
                        int_rows.append({var: dj, nv: ei})
                        nv += 1
        vecs = _integer_kernel(int_rows, nv)
        mods = [0] * n
        for k, (d, c) in enumerate(shapes):
            for i, ei in enumerate(c.moduli):
                for j in range(d.ngens):
                    mods[offsets[k] + i * d.ngens + j] = ei
        vecs = _hermite_basis([{v: x for v, x in vec.items() if v < n} for vec in vecs], n, mods)

    out = []
    seen = set()
    for vec in vecs:
        maps = []
        for k, (d, c) in enumerate(shapes):
            o = offsets[k]
            m = [[vec.get(o + i * d.ngens + j, 0) for j in range(d.ngens)] for i in range(c.ngens)]
            maps.append(ModuleMap(d, c, Matrix._raw(ring, m, d.ngens), check=False))
        key = tuple(f.matrix for f in maps)
        if all(f.is_zero() for f in maps) or key in seen:
            continue
        seen.add(key)
        out.append(tuple(maps))
    return out
