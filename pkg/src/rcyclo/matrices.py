"""Exact linear algebra over Z, Z/p^m, and F_p.

Small dense matrices with arbitrary-precision integer entries.  Everything
here is deterministic: pivots are chosen by (absolute value, row, column), so
repeated runs produce identical transforms.

Smith normal form is computed with row/column operations while carrying the
unimodular transforms U and V (U A V = D).  A coefficient-growth guard aborts
with a diagnostic if any intermediate entry exceeds 512 bits; the inputs this
package produces are tiny, so hitting the guard indicates a presentation bug
upstream rather than a big computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

GROWTH_GUARD_BITS = 512


class CoefficientError(Exception):
    """Mismatch of base rings, or coefficient growth past the guard."""


def xgcd(a, b):
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s, next_s = 1, 0
    t, next_t = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        s, next_s = next_s, s - q * next_s
        t, next_t = next_t, t - q * next_t
        g, next_g = next_g, g - q * next_g
    if g < 0:
        g, s, t = -g, -s, -t
    return g, s, t


class Mat:
    """Dense integer matrix, list-of-rows storage."""

    __slots__ = ("m", "n", "rows")

    def __init__(self, m, n, rows=None):
        self.m = m
        self.n = n
        if rows is None:
            self.rows = [[0] * n for _ in range(m)]
        else:
            assert len(rows) == m and all(len(r) == n for r in rows)
            self.rows = [list(r) for r in rows]

    @classmethod
    def identity(cls, n):
        a = cls(n, n)
        for i in range(n):
            a.rows[i][i] = 1
        return a

    @classmethod
    def from_columns(cls, n, cols):
        a = cls(n, len(cols))
        for j, c in enumerate(cols):
            assert len(c) == n
            for i in range(n):
                a.rows[i][j] = c[i]
        return a

    def copy(self):
        return Mat(self.m, self.n, self.rows)

    def col(self, j):
        return [self.rows[i][j] for i in range(self.m)]

    def mul(self, other):
        assert self.n == other.m
        out = Mat(self.m, other.n)
        for i in range(self.m):
            ri = self.rows[i]
            oi = out.rows[i]
            for k, a in enumerate(ri):
                if a:
                    rk = other.rows[k]
                    for j in range(other.n):
                        if rk[j]:
                            oi[j] += a * rk[j]
        return out

    def mul_vec(self, v):
        assert len(v) == self.n
        return [sum(r[j] * v[j] for j in range(self.n)) for r in self.rows]

    def hstack(self, other):
        assert self.m == other.m
        return Mat(self.m, self.n + other.n, [self.rows[i] + other.rows[i] for i in range(self.m)])

    def is_zero(self):
        return all(all(x == 0 for x in r) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, Mat) and self.m == other.m and self.n == other.n and self.rows == other.rows

    def __repr__(self):
        return f"Mat({self.m}x{self.n}, {self.rows})"


def _guard(x):
    if abs(x) >> GROWTH_GUARD_BITS:
        raise CoefficientError(
            f"matrix entry exceeds {GROWTH_GUARD_BITS} bits during SNF; "
            "all inputs in this package are tiny, so this indicates a bad "
            "presentation upstream"
        )
    return x


@dataclass
class SNF:
    """U * A * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}."""

    d: Mat
    u: Mat
    v: Mat
    rank: int

    def diagonal(self):
        return [self.d.rows[i][i] for i in range(min(self.d.m, self.d.n))]


def smith_normal_form(a: Mat) -> SNF:
    """Smith normal form over Z with transforms, deterministic pivoting."""
    d = a.copy()
    m, n = d.m, d.n
    u = Mat.identity(m)
    v = Mat.identity(n)
    rows, urows, vrows = d.rows, u.rows, v.rows

    def row_op(i1, i2, p, q, r, s):
        # (row i1, row i2) <- (p*r1 + q*r2, r*r1 + s*r2), with ps - qr = +-1
        for mat in (rows, urows):
            a1, a2 = mat[i1], mat[i2]
            for j in range(len(a1)):
                x, y = a1[j], a2[j]
                a1[j] = _guard(p * x + q * y)
                a2[j] = _guard(r * x + s * y)

    def col_op(j1, j2, p, q, r, s):
        # (col j1, col j2) <- (p*c1 + q*c2, r*c1 + s*c2), with ps - qr = +-1
        for mat, height in ((rows, m), (vrows, n)):
            for i in range(height):
                x, y = mat[i][j1], mat[i][j2]
                mat[i][j1] = _guard(p * x + q * y)
                mat[i][j2] = _guard(r * x + s * y)

    def find_pivot(k):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                x = abs(rows[i][j])
                if x and (best is None or x < best[0]):
                    best = (x, i, j)
        return best

    k = 0
    while True:
        piv = find_pivot(k)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != k:
            row_op(k, pi, 0, 1, 1, 0)
        if pj != k:
            col_op(k, pj, 0, 1, 1, 0)
        while True:
            for i in range(k + 1, m):
                x = rows[i][k]
                if x == 0:
                    continue
                p = rows[k][k]
                if x % p == 0:
                    row_op(k, i, 1, 0, -(x // p), 1)
                else:
                    g, s, t = xgcd(p, x)
                    row_op(k, i, s, t, -(x // g), p // g)
            dirty = False
            for j in range(k + 1, n):
                x = rows[k][j]
                if x == 0:
                    continue
                p = rows[k][k]
                if x % p == 0:
                    col_op(k, j, 1, 0, -(x // p), 1)
                else:
                    g, s, t = xgcd(p, x)
                    col_op(k, j, s, t, -(x // g), p // g)
                    dirty = True
            if not dirty and all(rows[i][k] == 0 for i in range(k + 1, m)):
                break
        k += 1
    rank = k

    def normalize_signs():
        for i in range(rank):
            if rows[i][i] < 0:
                for j in range(n):
                    rows[i][j] = -rows[i][j]
                for j in range(m):
                    urows[i][j] = -urows[i][j]

    normalize_signs()
    # enforce the divisibility chain d_i | d_{i+1}
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            a1, a2 = rows[i][i], rows[i + 1][i + 1]
            if a1 and a2 % a1 != 0:
                col_op(i, i + 1, 1, 1, 0, 1)  # col_i += col_{i+1}
                g, s, t = xgcd(rows[i][i], rows[i + 1][i])
                row_op(i, i + 1, s, t, -(rows[i + 1][i] // g), rows[i][i] // g)
                x = rows[i][i + 1]
                assert x % rows[i][i] == 0
                col_op(i, i + 1, 1, 0, -(x // rows[i][i]), 1)
                normalize_signs()
                changed = True
    return SNF(d=d, u=u, v=v, rank=rank)


def det_unimodular(a: Mat):
    """Determinant by fraction-free (Bareiss) elimination."""
    assert a.m == a.n
    n = a.n
    if n == 0:
        return 1
    mat = [r[:] for r in a.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            for i in range(k + 1, n):
                if mat[i][k]:
                    mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[n - 1][n - 1]


def verify_snf(a: Mat, s: SNF) -> bool:
    """Check U*A*V = D, D diagonal with divisibility chain, U and V unimodular."""
    if s.u.mul(a).mul(s.v) != s.d:
        return False
    for i in range(s.d.m):
        for j in range(s.d.n):
            if i != j and s.d.rows[i][j] != 0:
                return False
    diag = s.diagonal()
    for i in range(len(diag) - 1):
        if diag[i] == 0 and diag[i + 1] != 0:
            return False
        if diag[i] != 0 and diag[i + 1] % diag[i] != 0:
            return False
    return abs(det_unimodular(s.u)) == 1 and abs(det_unimodular(s.v)) == 1


def kernel_basis(a: Mat):
    """Basis (list of length-n vectors) of the integer kernel lattice of a."""
    s = smith_normal_form(a)
    cols = []
    for j in range(a.n):
        if j >= min(a.m, a.n) or s.d.rows[j][j] == 0:
            cols.append(s.v.col(j))
    return cols


def lattice_basis(vectors, n):
    """Basis of the sublattice of Z^n spanned by the given vectors."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    a = Mat.from_columns(n, vecs)
    s = smith_normal_form(a)
    # A*V = U^{-1}*D, so the first `rank` columns of A*V span the same lattice
    av = a.mul(s.v)
    return [av.col(j) for j in range(s.rank)]


def solve_in_lattice(basis, target, n):
    """Solve sum_j c_j basis_j = target over Z; return coefficients or None."""
    if not basis:
        return [] if not any(target) else None
    a = Mat.from_columns(n, basis)
    s = smith_normal_form(a)
    ut = s.u.mul_vec(target)
    y = [0] * a.n
    for i in range(a.m):
        di = s.d.rows[i][i] if i < min(a.m, a.n) else 0
        if di:
            if ut[i] % di != 0:
                return None
            y[i] = ut[i] // di
        elif ut[i] != 0:
            return None
    return s.v.mul_vec(y)


def invert_unimodular(u: Mat) -> Mat:
    """Inverse of a unimodular integer matrix."""
    cols = [u.col(j) for j in range(u.n)]
    inv_cols = []
    for i in range(u.n):
        e = [0] * u.n
        e[i] = 1
        c = solve_in_lattice(cols, e, u.n)
        assert c is not None, "matrix is not unimodular"
        inv_cols.append(c)
    return Mat.from_columns(u.n, inv_cols)


# ---------------------------------------------------------------------------
# finitely generated abelian groups presented as Z^n / column-span(relations)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbGroup:
    """Invariant-factor form: torsion d_1 | d_2 | ... (each > 1) plus free rank."""

    torsion: tuple
    rank: int

    @property
    def order(self):
        if self.rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"


def presentation_group(n, relations) -> AbGroup:
    """Invariant factors of Z^n / <relations> (relations: length-n vectors)."""
    if n == 0:
        return AbGroup(torsion=(), rank=0)
    rels = [r for r in relations if any(r)]
    if not rels:
        return AbGroup(torsion=(), rank=n)
    s = smith_normal_form(Mat.from_columns(n, rels))
    diag = s.diagonal()
    torsion = tuple(d for d in diag if d > 1)
    rank = n - sum(1 for d in diag if d != 0)
    return AbGroup(torsion=torsion, rank=rank)


@dataclass
class PresentedModule:
    """Z^n modulo the column span of integer relation vectors."""

    n: int
    relations: list
    generators: list | None = field(default=None)

    def group(self) -> AbGroup:
        return presentation_group(self.n, self.relations)

    @classmethod
    def free(cls, n):
        return cls(n=n, relations=[])

    @classmethod
    def mod_q(cls, n, q):
        """(Z/q)^n; q = 0 gives Z^n."""
        rels = []
        if q:
            for i in range(n):
                e = [0] * n
                e[i] = q
                rels.append(e)
        return cls(n=n, relations=rels)


def map_kernel_cokernel(f: Mat, source: PresentedModule, target: PresentedModule):
    """Kernel and cokernel of the induced map source -> target.

    f must send relations of the source into the relation lattice of the
    target (checked).  The returned kernel carries `generators`: columns in
    Z^{n_source} lifting its abstract generators.
    """
    assert f.m == target.n and f.n == source.n, "shape mismatch"
    tgt_lattice = lattice_basis(target.relations, target.n)
    for r in source.relations:
        if solve_in_lattice(tgt_lattice, f.mul_vec(r), target.n) is None:
            raise CoefficientError("map does not respect relations")

    coker = PresentedModule(
        n=target.n,
        relations=[f.col(j) for j in range(f.n)] + [list(r) for r in target.relations],
    )

    # preimage lattice K = {x : f x in <target relations>}
    if tgt_lattice:
        stacked = f.hstack(Mat.from_columns(target.n, [[-v for v in r] for r in tgt_lattice]))
    else:
        stacked = f
    kb = kernel_basis(stacked)
    gens = lattice_basis([v[: source.n] for v in kb], source.n)
    rels = []
    for r in source.relations:
        c = solve_in_lattice(gens, list(r), source.n)
        assert c is not None, "source relation escaped the kernel lattice"
        rels.append(c)
    ker = PresentedModule(n=len(gens), relations=rels, generators=gens)
    return ker, coker


def brute_force_kernel_cokernel(f: Mat, source: PresentedModule, target: PresentedModule):
    """Oracle: enumerate every element of small finite modules.

    Returns (kernel order, cokernel order).  Both modules must be finite with
    order <= 2**10 or so.
    """
    import itertools

    def snf_coords(mod):
        s = smith_normal_form(Mat.from_columns(mod.n, mod.relations or [[0] * mod.n]))
        diag = s.diagonal() + [0] * (mod.n - min(mod.n, len(mod.relations or [[0] * mod.n])))
        orders = []
        for i in range(mod.n):
            d = s.d.rows[i][i] if i < min(s.d.m, s.d.n) else 0
            assert d != 0, "brute force needs finite modules"
            orders.append(abs(d))
        return s, orders

    ss, s_orders = snf_coords(source)
    st, t_orders = snf_coords(target)
    assert all(s_orders) and all(t_orders)
    total = 1
    for d in s_orders:
        total *= d
    assert total <= 2**12, "oracle limited to small modules"

    su_inv = invert_unimodular(ss.u)

    def target_nf(vec):
        w = st.u.mul_vec(vec)
        return tuple(w[i] % t_orders[i] for i in range(target.n))

    kernel_order = 0
    image = set()
    for y in itertools.product(*[range(d) for d in s_orders]):
        x = su_inv.mul_vec(list(y))
        img = target_nf(f.mul_vec(x))
        image.add(img)
        if not any(img):
            kernel_order += 1
    t_total = 1
    for d in t_orders:
        t_total *= d
    return kernel_order, t_total // len(image)


# ---------------------------------------------------------------------------
# fast F_p linear algebra (dense, p small); F_2 uses bitmask rows
# ---------------------------------------------------------------------------


def f2_rank(rows):
    """Rank over F_2 of rows given as int bitmasks."""
    pivots = []
    for row in rows:
        r = row
        for p in pivots:
            if r & (p & -p):
                r ^= p
        if r:
            pivots.append(r)
    return len(pivots)


def f2_kernel(rows, ncols):
    """Kernel basis over F_2 of the m x ncols matrix with bitmask rows.

    Returns bitmask vectors x of length ncols with A x = 0.
    """
    cols = []
    for j in range(ncols):
        mask = 0
        for i, row in enumerate(rows):
            if (row >> j) & 1:
                mask |= 1 << i
        cols.append(mask)
    combos = [1 << j for j in range(ncols)]
    pivots = {}
    kernel = []
    for j in range(ncols):
        c, comb = cols[j], combos[j]
        while c:
            b = (c & -c).bit_length() - 1
            if b in pivots:
                pc, pcomb = pivots[b]
                c ^= pc
                comb ^= pcomb
            else:
                pivots[b] = (c, comb)
                break
        if not c:
            kernel.append(comb)
    return kernel


def fp_rref(rows, p):
    """Reduced row echelon form over F_p; returns (rref rows, pivot columns)."""
    mat = [[x % p for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = pow(mat[r][c], -1, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                fch = mat[i][c]
                mat[i] = [(x - fch * y) % p for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots
