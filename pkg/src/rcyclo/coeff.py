"""Canonical coefficient-ring presentations and C2-Mackey functor algebra.

Bigraded coefficient rings are stored trigraded with the filtration slot t:
a class of bidegree (s, w) sits in tridegree (s, 0, w), except the
polynomial generator x whose bidegree (2, 1) is stored as (0, 2, 1) so that
the filtration spectral sequences can reuse the same alphabets.  The bidegree
of a trigraded class is recovered as (s + t, w).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gralg import (
    GradedElement,
    Generator,
    Monomial,
    ModuleWindow,
    Presentation,
    Window,
    degree_basis,
)
from .matrices import (
    CoefficientError,
    Mat,
    PresentedModule,
    lattice_basis,
    map_kernel_cokernel,
    solve_in_lattice,
)


@dataclass(frozen=True)
class CoefficientPresentation:
    """A ModuleWindow-producing recipe plus metadata."""

    presentation: Presentation
    spectrum: str
    flavor: str  # "coefficients" | "hfpss" | "tss" | "gfp"
    params: dict = field(default_factory=dict)

    def window(self, win: Window, ring=None) -> ModuleWindow:
        ring = ring or ("Fp", self.presentation.char)
        return ModuleWindow(self.presentation, win, ring)

    def basis(self, d):
        return degree_basis(self.presentation, d)

    def bigraded_basis(self, s, w):
        """All monomials of bidegree (s, w) = (s_tri + t, w).

        Only valid for coefficient rings (no u generator): with u present the
        bigraded pieces are power series and not finite.
        """
        if self.presentation.has("u"):
            raise CoefficientError("bigraded pieces are not finite for filtered presentations")
        out = []
        t = 0
        while True:
            got = degree_basis(self.presentation, (s - t, t, w))
            out.extend(got)
            t += 2
            if not self.presentation.has("x") or t > max(0, 2 * abs(s) + 2 * abs(w) + 4):
                break
        return out


def _cone2(name, char, with_u=None, with_x=False, spectrum="", flavor="coefficients", params=None):
    gens = [
        Generator("theta", (0, 0, 2), "marker"),
        Generator("tau", (0, 0, -1), "nonneg"),
        Generator("rho", (-1, 0, -1), "nonneg"),
    ]
    if with_u:
        gens.append(Generator("u", (-2, 0, -1), with_u))
    if with_x:
        gens.append(Generator("x", (0, 2, 1), "nonneg"))
    pres = Presentation(name=name, family="cone2", char=char, generators=tuple(gens))
    return CoefficientPresentation(pres, spectrum, flavor, params or {})


def _odd(name, p, with_u=None, with_x=False, spectrum="", flavor="coefficients"):
    gens = [Generator("tau2", (0, 0, -4), "laurent")]
    if with_u:
        gens.append(Generator("u", (-2, 0, -1), with_u))
    if with_x:
        gens.append(Generator("x", (0, 2, 1), "nonneg"))
    pres = Presentation(name=name, family="odd", char=p, generators=tuple(gens))
    return CoefficientPresentation(pres, spectrum, flavor, {"p": p})


def hf2_coefficients() -> CoefficientPresentation:
    """F2[tau, rho] + F2[tau, rho]/(tau^inf, rho^inf){theta}.

    |tau| = (0,-1), |rho| = (-1,-1), |theta| = (0,2) in (s, w).
    """
    return _cone2("hf2", 2, spectrum="HF2bar")


def hfp_odd_coefficients(p: int) -> CoefficientPresentation:
    """F_p[tau^{+-2}] with |tau| = (0,-2); rejects p = 2."""
    if p == 2:
        raise CoefficientError("hfp_odd_coefficients requires an odd prime")
    _check_prime(p)
    return _odd(f"hfp_odd_{p}", p, spectrum="HFpbar")


def thr_coefficients(p: int) -> CoefficientPresentation:
    """Coefficients of the 2-sided bar construction: polynomial x with |x| = (2,1)."""
    _check_prime(p)
    if p == 2:
        return _cone2("thr2", 2, with_x=True, spectrum="THR(HF2bar)")
    return _odd(f"thr_odd_{p}", p, with_x=True, spectrum="THR(HFpbar)")


def hfpss_presentation(p: int) -> CoefficientPresentation:
    """E2 alphabet for the homotopy-fixed-point style filtration (u power series)."""
    _check_prime(p)
    if p == 2:
        return _cone2("hfpss2", 2, with_u="nonneg", with_x=True, spectrum="TCRminus(HF2bar)", flavor="hfpss")
    return _odd(f"hfpss_odd_{p}", p, with_u="nonneg", with_x=True, spectrum="TCRminus(HFpbar)", flavor="hfpss")


def tss_presentation(p: int) -> CoefficientPresentation:
    """E2 alphabet for the Tate-style filtration (Laurent u)."""
    _check_prime(p)
    if p == 2:
        return _cone2("tss2", 2, with_u="laurent", with_x=True, spectrum="TPR(HF2bar)", flavor="tss")
    return _odd(f"tss_odd_{p}", p, with_u="laurent", with_x=True, spectrum="TPR(HFpbar)", flavor="tss")


def gfp_thr_f2_coefficients():
    """F2[w1, w2] with |w1| = |w2| = 1 and the involution swapping w1, w2.

    Returns (CoefficientPresentation, involution) where the involution maps a
    GradedElement to its swap.
    """
    pres = Presentation(
        name="gfp_thr",
        family="sym",
        char=2,
        generators=(Generator("w1", (1, 0, 0), "nonneg"), Generator("w2", (1, 0, 0), "nonneg")),
    )
    cp = CoefficientPresentation(pres, "THR(HF2bar)^{phi}", "gfp")

    i1, i2 = 0, 1

    def involution(elem: GradedElement) -> GradedElement:
        out = {}
        for m, c in elem.terms.items():
            e = list(m.exps)
            e[i1], e[i2] = e[i2], e[i1]
            mm = Monomial(tuple(e))
            out[mm] = out.get(mm, 0) + c
        return GradedElement(elem.pres, out, char=elem.char)

    return cp, involution


def _check_prime(p):
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise CoefficientError(f"{p} is not prime")


# ---------------------------------------------------------------------------
# C2-Mackey functors
# ---------------------------------------------------------------------------


def _maps_equal(a: Mat, b: Mat, target: PresentedModule) -> bool:
    lat = lattice_basis(target.relations, target.n)
    for j in range(a.n):
        diff = [x - y for x, y in zip(a.col(j), b.col(j))]
        if solve_in_lattice(lat, diff, target.n) is None:
            return False
    return True


@dataclass
class MackeyFunctor:
    """Levelwise abelian groups with restriction, transfer, and Weyl action.

    top = M(C2/C2), bottom = M(C2/e); res: top -> bottom, tr: bottom -> top,
    weyl: bottom -> bottom.  The double-coset relation res . tr = 1 + weyl and
    the companion identities are checked on generators.
    """

    top: PresentedModule
    bottom: PresentedModule
    res: Mat
    tr: Mat
    weyl: Mat
    label: str = ""

    def check_axioms(self):
        # structure maps must be well defined on the presented quotients
        for g, src, tgt in (
            (self.res, self.top, self.bottom),
            (self.tr, self.bottom, self.top),
            (self.weyl, self.bottom, self.bottom),
        ):
            lat = lattice_basis(tgt.relations, tgt.n)
            for r in src.relations:
                if solve_in_lattice(lat, g.mul_vec(r), tgt.n) is None:
                    return False
        ident = Mat.identity(self.bottom.n)
        one_plus_weyl = Mat(
            self.bottom.n,
            self.bottom.n,
            [
                [ident.rows[i][j] + self.weyl.rows[i][j] for j in range(self.bottom.n)]
                for i in range(self.bottom.n)
            ],
        )
        ok = _maps_equal(self.res.mul(self.tr), one_plus_weyl, self.bottom)
        ok = ok and _maps_equal(self.tr.mul(self.weyl), self.tr, self.top)
        ok = ok and _maps_equal(self.weyl.mul(self.res), self.res, self.bottom)
        ok = ok and _maps_equal(self.weyl.mul(self.weyl), ident, self.bottom)
        return ok


def constant_mackey(b: PresentedModule, label="") -> MackeyFunctor:
    """Constant Mackey functor: res = id, tr = multiplication by 2, weyl = id."""
    ident = Mat.identity(b.n)
    two = Mat(b.n, b.n, [[2 * ident.rows[i][j] for j in range(b.n)] for i in range(b.n)])
    m = MackeyFunctor(
        top=PresentedModule(b.n, [list(r) for r in b.relations]),
        bottom=PresentedModule(b.n, [list(r) for r in b.relations]),
        res=ident,
        tr=two,
        weyl=Mat.identity(b.n),
        label=label,
    )
    assert m.check_axioms()
    return m


@dataclass
class MackeyMap:
    """Levelwise map of Mackey functors (top and bottom matrices)."""

    source: MackeyFunctor
    target: MackeyFunctor
    f_top: Mat
    f_bottom: Mat

    def is_equivariant(self) -> bool:
        ok = _maps_equal(self.f_bottom.mul(self.source.res), self.target.res.mul(self.f_top), self.target.bottom)
        ok = ok and _maps_equal(self.f_top.mul(self.source.tr), self.target.tr.mul(self.f_bottom), self.target.top)
        ok = ok and _maps_equal(
            self.f_bottom.mul(self.source.weyl), self.target.weyl.mul(self.f_bottom), self.target.bottom
        )
        return ok


def _induced_on_kernels(g: Mat, ker_src, ker_tgt, tgt_module: PresentedModule) -> Mat:
    """Matrix of g restricted to kernel generators, in kernel coordinates.

    Coefficients are found on (kernel generators + ambient relations); the
    relation part is a relation of the kernel module, so the class of the
    coefficient vector is well defined.
    """
    gens_t = list(ker_tgt.generators or [])
    spanning = gens_t + [list(r) for r in tgt_module.relations]
    cols = []
    for gen in ker_src.generators or []:
        img = g.mul_vec(gen)
        c = solve_in_lattice(spanning, img, tgt_module.n)
        assert c is not None, "structure map does not preserve kernels"
        cols.append(c[: len(gens_t)])
    return Mat.from_columns(len(gens_t), cols) if cols else Mat(len(gens_t), 0)


def mackey_kernel_cokernel(f: MackeyMap):
    """Levelwise kernel and cokernel with induced structure maps, axioms re-verified."""
    if not f.is_equivariant():
        raise CoefficientError("map of Mackey functors does not commute with res/tr/weyl")
    kt, ct = map_kernel_cokernel(f.f_top, f.source.top, f.target.top)
    kb, cb = map_kernel_cokernel(f.f_bottom, f.source.bottom, f.target.bottom)

    ker = MackeyFunctor(
        top=kt,
        bottom=kb,
        res=_induced_on_kernels(f.source.res, kt, kb, f.source.bottom),
        tr=_induced_on_kernels(f.source.tr, kb, kt, f.source.top),
        weyl=_induced_on_kernels(f.source.weyl, kb, kb, f.source.bottom),
        label=f"ker({f.source.label})",
    )
    coker = MackeyFunctor(
        top=ct,
        bottom=cb,
        res=f.target.res,
        tr=f.target.tr,
        weyl=f.target.weyl,
        label=f"coker({f.target.label})",
    )
    assert ker.check_axioms(), "kernel Mackey functor fails the axioms"
    assert coker.check_axioms(), "cokernel Mackey functor fails the axioms"
    return ker, coker
