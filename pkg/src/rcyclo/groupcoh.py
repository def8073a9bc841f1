"""Homological algebra over F_2 for mu_2 = C_2 and for the dihedral group of
order 8.

All modules here are F_2-vector spaces; matrices are lists of row bitmasks
(bit j of row i is the (i, j) entry), acting on column vectors encoded as
ints.  Over F_2 the group-ring elements sigma - 1 and sigma + 1 agree, so the
2-periodic resolution of the trivial C_2-module gives

    H^0(C_2; M) = ker(1 + sigma),
    H^s(C_2; M) = ker(1 + sigma) / im(1 + sigma)   for s >= 1,

and the Tate groups equal ker/im in every integer degree.  mu_2 and C_2 are
the same abstract group; both names appear in reports only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import f2_kernel, f2_rank


class GModuleError(Exception):
    """Group relations fail on the supplied action matrices."""


class ExactnessError(Exception):
    """A claimed short exact sequence is not exact."""


# ---------------------------------------------------------------------------
# F_2 matrix helpers on bitmask rows
# ---------------------------------------------------------------------------


def f2_identity(n):
    return [1 << i for i in range(n)]


def f2_apply(rows, v):
    out = 0
    for i, r in enumerate(rows):
        if (r & v).bit_count() & 1:
            out |= 1 << i
    return out


def f2_add(a, b):
    return [x ^ y for x, y in zip(a, b)]


def f2_mul(a, b):
    """Matrix product A @ B for bitmask-row matrices (A: m x k, B: k x n)."""
    out = []
    for r in a:
        acc = 0
        rr = r
        while rr:
            k = (rr & -rr).bit_length() - 1
            acc ^= b[k]
            rr &= rr - 1
        out.append(acc)
    return out


def f2_is_zero(rows):
    return all(r == 0 for r in rows)


def f2_cols_to_rows(cols, nrows):
    rows = [0] * nrows
    for j, c in enumerate(cols):
        cc = c
        while cc:
            i = (cc & -cc).bit_length() - 1
            rows[i] |= 1 << j
            cc &= cc - 1
    return rows


def f2_solve(rows, ncols, target):
    """One solution x (bitmask over ncols) of A x = target, or None."""
    cols = [0] * ncols
    for i, r in enumerate(rows):
        rr = r
        while rr:
            j = (rr & -rr).bit_length() - 1
            cols[j] |= 1 << i
            rr &= rr - 1
    pivots = {}
    combos = {}
    for j in range(ncols):
        c, comb = cols[j], 1 << j
        while c:
            b = (c & -c).bit_length() - 1
            if b in pivots:
                c ^= pivots[b]
                comb ^= combos[b]
            else:
                pivots[b] = c
                combos[b] = comb
                break
    t, x = target, 0
    while t:
        b = (t & -t).bit_length() - 1
        if b not in pivots:
            return None
        t ^= pivots[b]
        x ^= combos[b]
    return x


def f2_solve_columns(cols, target):
    """Coefficients c (bitmask over the column list) with sum c_j col_j = target."""
    pivots = {}
    combos = {}
    for j, c0 in enumerate(cols):
        c, comb = c0, 1 << j
        while c:
            b = (c & -c).bit_length() - 1
            if b in pivots:
                c ^= pivots[b]
                comb ^= combos[b]
            else:
                pivots[b] = c
                combos[b] = comb
                break
    t, x = target, 0
    while t:
        b = (t & -t).bit_length() - 1
        if b not in pivots:
            return None
        t ^= pivots[b]
        x ^= combos[b]
    return x


def f2_image_basis(rows, ncols):
    """Echelon basis of the column space (as column bitmask vectors)."""
    cols = [0] * ncols
    for i, r in enumerate(rows):
        rr = r
        while rr:
            j = (rr & -rr).bit_length() - 1
            cols[j] |= 1 << i
            rr &= rr - 1
    basis = []
    for c in cols:
        r = span_reduce(basis, c)
        if r:
            basis.append(r)
    return basis


def span_reduce(echelon, v):
    for p in echelon:
        if v & (p & -p):
            v ^= p
    return v


def quotient_representatives(ker_basis, im_basis):
    """Subset of ker_basis spanning ker/im."""
    ech = []
    for b in im_basis:
        r = span_reduce(ech, b)
        if r:
            ech.append(r)
    reps = []
    for v in ker_basis:
        r = span_reduce(ech, v)
        if r:
            ech.append(r)
            reps.append(v)
    return reps


# ---------------------------------------------------------------------------
# C_2-modules
# ---------------------------------------------------------------------------


@dataclass
class GModule:
    """F_2-module with an involution sigma (rows are bitmasks)."""

    dim: int
    sigma: list
    label: str = ""

    def __post_init__(self):
        if f2_mul(self.sigma, self.sigma) != f2_identity(self.dim):
            raise GModuleError(f"sigma^2 != 1 on {self.label or 'module'}")

    @classmethod
    def trivial(cls, dim=1, label="F2"):
        return cls(dim=dim, sigma=f2_identity(dim), label=label)

    @classmethod
    def regular(cls, label="F2[C2]"):
        return cls(dim=2, sigma=[0b10, 0b01], label=label)

    def one_plus_sigma(self):
        return f2_add(self.sigma, f2_identity(self.dim))


def c2_cohomology(m: GModule, s_range):
    """H^s(C_2; M) for s >= 0: {s: (dimension, cocycle representatives)}."""
    a = m.one_plus_sigma()
    ker = f2_kernel(a, m.dim)
    im = f2_image_basis(a, m.dim)
    reps_pos = quotient_representatives(ker, im)
    out = {}
    for s in s_range:
        if s < 0:
            raise ValueError("group cohomology lives in s >= 0; use c2_tate")
        out[s] = (len(ker), list(ker)) if s == 0 else (len(reps_pos), list(reps_pos))
    return out


def c2_tate(m: GModule, s_range):
    """Tate groups of C_2: ker(1 + sigma)/im(1 + sigma) in every degree."""
    a = m.one_plus_sigma()
    ker = f2_kernel(a, m.dim)
    im = f2_image_basis(a, m.dim)
    reps = quotient_representatives(ker, im)
    return {s: (len(reps), list(reps)) for s in s_range}


@dataclass
class ShortExactSequence:
    sub: GModule
    mid: GModule
    quot: GModule
    inject: list  # mid.dim rows over sub.dim columns
    project: list  # quot.dim rows over mid.dim columns

    def check(self):
        if f2_rank(self.inject) != self.sub.dim:
            raise ExactnessError("inclusion is not injective")
        if f2_rank(self.project) != self.quot.dim:
            raise ExactnessError("projection is not surjective")
        if not f2_is_zero(f2_mul(self.project, self.inject)):
            raise ExactnessError("composite is nonzero")
        if self.sub.dim + self.quot.dim != self.mid.dim:
            raise ExactnessError("dimension count fails")
        if f2_mul(self.mid.sigma, self.inject) != f2_mul(self.inject, self.sub.sigma):
            raise ExactnessError("inclusion is not equivariant")
        if f2_mul(self.quot.sigma, self.project) != f2_mul(self.project, self.mid.sigma):
            raise ExactnessError("projection is not equivariant")


def connecting_map(ses: ShortExactSequence, s: int):
    """Snake-lemma connecting map H^s(C_2; quot) -> H^{s+1}(C_2; sub).

    On the 2-periodic resolution: lift a cocycle along the projection, apply
    1 + sigma in the middle, pull back along the inclusion, read off the
    class.  Returns (matrix rows, source reps, target reps); the matrix has
    one row per target representative.
    """
    ses.check()
    src_reps = c2_cohomology(ses.quot, [s])[s][1]
    tgt_reps = c2_cohomology(ses.sub, [s + 1])[s + 1][1]
    d_mid = ses.mid.one_plus_sigma()
    im_sub = f2_image_basis(ses.sub.one_plus_sigma(), ses.sub.dim)
    cols = tgt_reps + im_sub
    rows = [0] * len(tgt_reps)
    for j, c in enumerate(src_reps):
        b = f2_solve(ses.project, ses.mid.dim, c)
        assert b is not None
        z = f2_apply(d_mid, b)
        a_val = f2_solve(ses.inject, ses.sub.dim, z)
        assert a_val is not None, "snake image is not in the submodule"
        coeffs = f2_solve_columns(cols, a_val)
        assert coeffs is not None, "connecting value escaped the cohomology basis"
        for i in range(len(tgt_reps)):
            if (coeffs >> i) & 1:
                rows[i] |= 1 << j
    return rows, src_reps, tgt_reps


# ---------------------------------------------------------------------------
# the dihedral group of order 8 and its bicomplex
# ---------------------------------------------------------------------------


class D8:
    """Dihedral group of order 8: sigma^2 = x^4 = 1, sigma x sigma = x^{-1}.

    Elements are indexed e = eps*4 + i for sigma^eps x^i.
    """

    order = 8
    SIGMA = 4
    X = 1

    @staticmethod
    def mul(e1, e2):
        eps1, i1 = divmod(e1, 4)
        eps2, i2 = divmod(e2, 4)
        eps = (eps1 + eps2) % 2
        i = ((-i1 if eps2 else i1) + i2) % 4
        return eps * 4 + i

    @staticmethod
    def inv(e):
        eps, i = divmod(e, 4)
        return e if eps else (4 - i) % 4


def _f2_power(mat, k, dim):
    out = f2_identity(dim)
    for _ in range(k):
        out = f2_mul(mat, out)
    return out


@dataclass
class D8Module:
    """F_2[D8]-module: dimension plus bitmask action matrices for sigma, x."""

    dim: int
    sigma: list
    x: list
    label: str = ""

    def __post_init__(self):
        ident = f2_identity(self.dim)
        if f2_mul(self.sigma, self.sigma) != ident:
            raise GModuleError("sigma^2 != 1")
        if _f2_power(self.x, 4, self.dim) != ident:
            raise GModuleError("x^4 != 1")
        sx = f2_mul(self.sigma, self.x)
        if f2_mul(sx, sx) != ident:
            raise GModuleError("(sigma x)^2 != 1")

    def action(self, e):
        eps, i = divmod(e, 4)
        out = _f2_power(self.x, i, self.dim)
        if eps:
            out = f2_mul(self.sigma, out)
        return out

    @classmethod
    def trivial(cls):
        ident = f2_identity(1)
        return cls(dim=1, sigma=ident, x=ident, label="F2")

    @classmethod
    def regular(cls):
        dim = 8
        sig = [0] * dim
        xx = [0] * dim
        for e in range(dim):
            sig[D8.mul(D8.SIGMA, e)] |= 1 << e
            xx[D8.mul(D8.X, e)] |= 1 << e
        return cls(dim=dim, sigma=sig, x=xx, label="F2[D8]")

    @classmethod
    def coset_mod_sigma(cls):
        """Permutation module F_2[D8/<sigma>]."""
        cosets = []
        index = {}
        for e in range(8):
            cs = frozenset({e, D8.mul(e, D8.SIGMA)})
            if cs not in index:
                index[cs] = len(cosets)
                cosets.append(cs)
        dim = len(cosets)

        def act(g):
            rows = [0] * dim
            for j, cs in enumerate(cosets):
                rep = min(cs)
                img = frozenset({D8.mul(g, rep), D8.mul(g, D8.mul(rep, D8.SIGMA))})
                rows[index[img]] |= 1 << j
            return rows

        return cls(dim=dim, sigma=act(D8.SIGMA), x=act(D8.X), label="F2[D8/<sigma>]")


class BicomplexD8:
    """width x height grid of copies of M (x) F_2[D8], diagonal left action.

    Horizontal maps (to the left) alternate multiplication by x+1 and by
    Sigma_x = 1 + x + x^2 + x^3; vertical maps are multiplication by sigma+1
    in even columns and by sigma*x+1 in odd columns.  Char 2: squares commute
    on the nose and the total differential is the plain sum.
    """

    def __init__(self, m: D8Module, width: int, height: int):
        self.m = m
        self.width = width
        self.height = height
        self.cell_dim = m.dim * 8

        def diag_action(e):
            am = m.action(e)
            rows = [0] * self.cell_dim
            for k in range(m.dim):
                for g in range(8):
                    src = k * 8 + g
                    hg = D8.mul(e, g)
                    for kk in range(m.dim):
                        if (am[kk] >> k) & 1:
                            rows[kk * 8 + hg] |= 1 << src
            return rows

        ident = f2_identity(self.cell_dim)
        act_x = diag_action(D8.X)
        act_x2 = diag_action(2)
        act_x3 = diag_action(3)
        act_sigma = diag_action(D8.SIGMA)
        act_sigmax = diag_action(D8.mul(D8.SIGMA, D8.X))
        self.op_x_plus_1 = f2_add(act_x, ident)
        self.op_sigma_x_sum = f2_add(f2_add(ident, act_x), f2_add(act_x2, act_x3))
        self.op_sigma_plus_1 = f2_add(act_sigma, ident)
        self.op_sigmax_plus_1 = f2_add(act_sigmax, ident)
        self.op_one_plus_x2 = f2_add(act_x2, ident)
        self._diag_action = diag_action

    def horizontal(self, col):
        """Map from column col to column col - 1 (col >= 1)."""
        return self.op_x_plus_1 if col % 2 == 1 else self.op_sigma_x_sum

    def vertical(self, col):
        return self.op_sigma_plus_1 if col % 2 == 0 else self.op_sigmax_plus_1

    def augmentation(self):
        """M (x) F_2[D8] -> M, m (x) g -> g^{-1} m."""
        rows = [0] * self.m.dim
        for g in range(8):
            inv_act = self.m.action(D8.inv(g))
            for k in range(self.m.dim):
                for kk in range(self.m.dim):
                    if (inv_act[kk] >> k) & 1:
                        rows[kk] |= 1 << (k * 8 + g)
        return rows

    def total_cells(self, n):
        return [(i, n - i) for i in range(max(0, n - self.height + 1), min(n, self.width - 1) + 1)]

    def total_differential(self, n):
        """T_n -> T_{n-1} as bitmask rows; returns (rows, dim T_n, dim T_{n-1})."""
        src = self.total_cells(n)
        tgt = self.total_cells(n - 1)
        tgt_offset = {cell: idx * self.cell_dim for idx, cell in enumerate(tgt)}
        rows = [0] * (len(tgt) * self.cell_dim)
        for sidx, (i, j) in enumerate(src):
            base = sidx * self.cell_dim
            if (i - 1, j) in tgt_offset:
                off = tgt_offset[(i - 1, j)]
                mat = self.horizontal(i)
                for r in range(self.cell_dim):
                    rows[off + r] ^= mat[r] << base
            if (i, j - 1) in tgt_offset:
                off = tgt_offset[(i, j - 1)]
                mat = self.vertical(i)
                for r in range(self.cell_dim):
                    rows[off + r] ^= mat[r] << base
        return rows, len(src) * self.cell_dim, len(tgt) * self.cell_dim


def d8_resolution_check(m: D8Module, width: int, height: int) -> dict:
    """Build the bicomplex on M and verify it resolves M.

    Exactness of the augmented total complex is certified in degrees
    <= min(width, height) - 2, the range where the truncation provably cannot
    interfere; the grid must be chosen accordingly.  Also checks the
    commuting squares, rows/columns being complexes, column homology
    concentrated in degree 0, and vanishing of the induced Sigma_x maps on
    the mu_2-quotient (mu_2 = <x^2>, where Sigma_x = (1+x)(1+x^2)).
    """
    bc = BicomplexD8(m, width, height)
    report = {
        "module": m.label,
        "width": width,
        "height": height,
        "cell_dim": bc.cell_dim,
    }
    report["rows_are_complexes"] = f2_is_zero(
        f2_mul(bc.op_x_plus_1, bc.op_sigma_x_sum)
    ) and f2_is_zero(f2_mul(bc.op_sigma_x_sum, bc.op_x_plus_1))
    report["columns_are_complexes"] = f2_is_zero(
        f2_mul(bc.op_sigma_plus_1, bc.op_sigma_plus_1)
    ) and f2_is_zero(f2_mul(bc.op_sigmax_plus_1, bc.op_sigmax_plus_1))
    squares = []
    for i in range(1, width):
        h = bc.horizontal(i)
        squares.append(f2_mul(bc.vertical(i - 1), h) == f2_mul(h, bc.vertical(i)))
    report["squares_commute"] = all(squares)

    certified = min(width, height) - 2
    report["certified_range"] = certified
    aug = bc.augmentation()
    d1, _, _ = bc.total_differential(1)
    report["augmentation_surjective"] = f2_rank(aug) == m.dim
    report["aug_after_d1_zero"] = f2_is_zero(f2_mul(aug, d1))
    report["d_squared_zero"] = True
    exact = {}
    dim_t0 = bc.cell_dim * len(bc.total_cells(0))
    rank_prev = f2_rank(d1)
    exact[0] = (dim_t0 - f2_rank(aug)) == rank_prev
    dprev = d1
    for n in range(2, certified + 2):
        dn, _, nrows = bc.total_differential(n)
        if not f2_is_zero(f2_mul(dprev, dn)):
            report["d_squared_zero"] = False
        rank_n = f2_rank(dn)
        if n - 1 <= certified:
            exact[n - 1] = (nrows - rank_prev) == rank_n
        dprev = dn
        rank_prev = rank_n
    report["exact_degrees"] = exact
    report["exact"] = bool(exact) and all(exact.values()) and report["augmentation_surjective"]

    # each column is M(x)F_2[D8] with one repeated differential; the diagonal
    # module is free over the relevant order-2 subgroup, so ker = im inside
    col_ok = []
    for op in (bc.op_sigma_plus_1, bc.op_sigmax_plus_1):
        rank = f2_rank(op)
        col_ok.append(bc.cell_dim - rank == rank)
    report["columns_resolve"] = all(col_ok)

    im_1x2 = f2_image_basis(bc.op_one_plus_x2, bc.cell_dim)
    sigma_x_cols = f2_image_basis(bc.op_sigma_x_sum, bc.cell_dim)
    ech = []
    for b in im_1x2:
        r = span_reduce(ech, b)
        if r:
            ech.append(r)
    report["mu2_quotient_sigma_x_zero"] = all(span_reduce(ech, v) == 0 for v in sigma_x_cols)
    report["ok"] = all(
        report[k]
        for k in (
            "rows_are_complexes",
            "columns_are_complexes",
            "squares_commute",
            "d_squared_zero",
            "aug_after_d1_zero",
            "exact",
            "columns_resolve",
            "mu2_quotient_sigma_x_zero",
        )
    )
    return report
