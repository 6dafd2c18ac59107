"""Smith normal form over Z and over fields, with transforms.

Pivoting is deterministic: the nonzero entry of smallest Euclidean size in
the active block, scanning rows before columns, ties going to the lowest
index.  Over a field every nonzero entry has the same size, so this is the
first nonzero entry in row-major order and pivots are normalised to 1.
"""

from __future__ import annotations

from .matrix import Matrix


class SmithForm:
    """``U @ A @ V == D`` with ``U``, ``V`` invertible over the ring.

    ``Uinv`` is carried along so that image bases and canonical generators
    can be read off without inverting anything afterwards.
    """

    __slots__ = ("ring", "A", "U", "Uinv", "V", "diag", "rank")

    def __init__(self, ring, A, U, Uinv, V, diag, rank):
        self.ring, self.A, self.U, self.Uinv, self.V = ring, A, U, Uinv, V
        self.diag, self.rank = diag, rank

    @property
    def D(self) -> Matrix:
        m, n = self.A.shape
        rows = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diag):
            rows[i][i] = d
        return Matrix._raw(self.ring, rows, n)

    def kernel_basis(self) -> list[list]:
        """Columns of V spanning the (right) kernel of A; a basis over Z too."""
        V = self.V
        return [[row[j] for row in V.rows] for j in range(self.rank, V.ncols)]

    def image_basis(self) -> list[list]:
        """A basis of the column span of A (a lattice basis over Z)."""
        Ui = self.Uinv
        return [[row[i] * d for row in Ui.rows] for i, d in enumerate(self.diag)]

    def solve(self, w):
        """Some ``y`` with ``A y == w``, or ``None``."""
        ring = self.ring
        red = ring.reduce
        uw = [red(sum(a * b for a, b in zip(r, w) if a)) for r in self.U.rows]
        z = [0] * self.A.ncols
        for i, d in enumerate(self.diag):
            if ring.tag == "z":
                if uw[i] % d:
                    return None
                z[i] = uw[i] // d
            else:
                z[i] = ring.quo(uw[i], d)
        if any(x != 0 for x in uw[self.rank:]):
            return None
        return [red(sum(a * b for a, b in zip(r, z) if a)) for r in self.V.rows]

    def contains(self, w) -> bool:
        return self.solve(w) is not None


def smith_form(A: Matrix) -> SmithForm:
    ring = A.ring
    m, n = A.shape
    a = A.tolist()
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    Ui = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    is_z = ring.tag == "z"
    p = ring.p
    red = (lambda x: x % p) if ring.tag == "fp" else (lambda x: x)
    # smallest absolute value over Z and Q (over Q this keeps integral
    # matrices integral whenever a +-1 pivot exists); first nonzero over F_p
    size = (lambda x: 1) if ring.tag == "fp" else abs
    stop = 1 if ring.tag != "q" else 0

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i != j:
            for r in a:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]

    def row_axpy(i, t, q):
        # row_i -= q * row_t
        ai, at = a[i], a[t]
        for k in range(n):
            if at[k]:
                ai[k] = red(ai[k] - q * at[k])
        ui, ut = U[i], U[t]
        for k in range(m):
            if ut[k]:
                ui[k] = red(ui[k] - q * ut[k])
        for r in Ui:
            if r[i]:
                r[t] = red(r[t] + q * r[i])

    def col_axpy(j, t, q):
        # col_j -= q * col_t
        for r in a:
            if r[t]:
                r[j] = red(r[j] - q * r[t])
        for r in V:
            if r[t]:
                r[j] = red(r[j] - q * r[t])

    def scale_row(t, u, uinv):
        a[t] = [red(u * x) for x in a[t]]
        U[t] = [red(u * x) for x in U[t]]
        for r in Ui:
            r[t] = red(r[t] * uinv)

    diag = []
    t = 0
    while t < min(m, n):
        while True:
            best = None
            bs = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    x = row[j]
                    if x:
                        s = size(x)
                        if best is None or s < bs:
                            best, bs = (i, j), s
                            if s == stop:
                                break
                if bs == stop:
                    break
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv if is_z else ring.quo(a[i][t], piv)
                    row_axpy(i, t, q)
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv if is_z else ring.quo(a[t][j], piv)
                    col_axpy(j, t, q)
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            if is_z:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    # row_t += row_bad, then re-reduce
                    row_axpy(t, bad, -1)
                    continue
            break
        if best is None:
            break
        piv = a[t][t]
        if is_z:
            if piv < 0:
                scale_row(t, -1, -1)
        elif piv != 1:
            scale_row(t, ring.inverse(piv), piv)
        diag.append(a[t][t])
        t += 1

    return SmithForm(ring, A, Matrix._raw(ring, U, m), Matrix._raw(ring, Ui, m),
                     Matrix._raw(ring, V, n), tuple(diag), len(diag))


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D`` and d1 | d2 | ... on the diagonal."""
    s = smith_form(A)
    return s.U, s.D, s.V
