"""Monomially presented trigraded modules and maps.

A Presentation fixes a finite generator alphabet with tridegrees (s, t, w),
an admissibility region for exponent vectors, and normalization rules for
products.  Three families cover everything this package computes:

* "cone2": polynomial generators tau, rho (plus optional u, x) together with
  a torsion summand spanned by theta-divided monomials.  A monomial either
  has theta-exponent 0 and nonnegative tau/rho exponents, or theta-exponent 1
  and nonpositive tau/rho exponents (the divided classes theta/(tau^a rho^b)).
  Products that leave the region are zero: tau * theta = 0, rho * theta = 0,
  and theta^2 = 0.
* "odd": a Laurent generator tau2 (tau^2 and its inverse) plus optional u, x.
* "sym": plain polynomial generators with nonnegative exponents.

Monomials are exponent tuples aligned with the presentation's generator
order; bases are always emitted in lexicographic exponent order, so output is
deterministic and byte-stable after JSON serialization with sorted keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .matrices import (
    Mat,
    PresentedModule,
    map_kernel_cokernel,
)

SCHEMA_MODULEWINDOW = "rcyclo/modulewindow-v1"
SCHEMA_GRADEDMAP = "rcyclo/gradedmap-v1"


class AlphabetError(Exception):
    """Unknown generator, or exponent vector outside the presentation."""


class WindowError(Exception):
    """Tridegree outside the requested window."""


@dataclass(frozen=True)
class Generator:
    name: str
    tridegree: tuple  # (s, t, w)
    domain: str = "nonneg"  # nonneg | laurent | marker | divided


@dataclass(frozen=True)
class Presentation:
    """Alphabet + admissibility + product rules, reproducible from name/params."""

    name: str
    family: str  # cone2 | odd | sym
    char: int  # coefficient characteristic for module pieces
    generators: tuple

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise AlphabetError(f"unknown generator {name!r} in presentation {self.name!r}")

    def has(self, name: str) -> bool:
        return any(g.name == name for g in self.generators)

    def unit(self):
        return Monomial((0,) * len(self.generators))

    def gen_monomial(self, name, exp=1):
        e = [0] * len(self.generators)
        e[self.index(name)] = exp
        return Monomial(tuple(e))


@dataclass(frozen=True)
class Monomial:
    """Exponent vector over a presentation's alphabet."""

    exps: tuple

    def exp(self, pres, name):
        return self.exps[pres.index(name)]

    def is_unit(self):
        return not any(self.exps)

    def __str__(self):
        return f"Monomial{self.exps}"


def monomial_str(pres: Presentation, m: Monomial) -> str:
    parts = []
    for g, e in zip(pres.generators, m.exps):
        if e == 0:
            continue
        parts.append(g.name if e == 1 else f"{g.name}^{e}")
    return "*".join(parts) if parts else "1"


def parse_monomial(pres: Presentation, s: str) -> Monomial:
    e = [0] * len(pres.generators)
    if s.strip() != "1":
        for part in s.split("*"):
            if "^" in part:
                name, exp = part.split("^")
                e[pres.index(name.strip())] += int(exp)
            else:
                e[pres.index(part.strip())] += 1
    m = Monomial(tuple(e))
    if not is_admissible(pres, m):
        raise AlphabetError(f"monomial {s!r} is not admissible in {pres.name!r}")
    return m


def tridegree(pres: Presentation, m: Monomial) -> tuple:
    """Integer linear combination of generator tridegrees."""
    if len(m.exps) != len(pres.generators):
        raise AlphabetError("exponent vector does not match alphabet")
    s = t = w = 0
    for g, e in zip(pres.generators, m.exps):
        s += e * g.tridegree[0]
        t += e * g.tridegree[1]
        w += e * g.tridegree[2]
    return (s, t, w)


def is_admissible(pres: Presentation, m: Monomial) -> bool:
    """Exponent vector inside the presentation's region (zero products excluded)."""
    if pres.family == "cone2":
        th = m.exp(pres, "theta")
        if th not in (0, 1):
            return False
        for g, e in zip(pres.generators, m.exps):
            if g.name == "theta":
                continue
            if g.name in ("tau", "rho"):
                if th == 1 and e > 0:
                    return False
                if th == 0 and e < 0:
                    return False
            elif g.domain == "nonneg" and e < 0:
                return False
        return True
    if pres.family == "odd":
        for g, e in zip(pres.generators, m.exps):
            if g.domain == "nonneg" and e < 0:
                return False
        return True
    if pres.family == "sym":
        return all(e >= 0 for e in m.exps)
    raise AlphabetError(f"unknown presentation family {pres.family!r}")


def mul_monomials(pres: Presentation, a: Monomial, b: Monomial):
    """Product monomial, or None when the product normalizes to zero.

    Exponents add; the result is zero when it leaves the admissibility
    region (theta^2 = 0, tau * theta = 0, overflow of a nonneg domain, ...).
    """
    exps = tuple(x + y for x, y in zip(a.exps, b.exps))
    m = Monomial(exps)
    return m if is_admissible(pres, m) else None


class GradedElement:
    """Coefficient-weighted formal sum of monomials, pruned of zeros."""

    __slots__ = ("pres", "char", "terms")

    def __init__(self, pres: Presentation, terms=None, char=None):
        self.pres = pres
        self.char = pres.char if char is None else char
        self.terms = {}
        for m, c in (terms or {}).items():
            c = c % self.char if self.char else c
            if c:
                self.terms[m] = c

    @classmethod
    def monomial(cls, pres, m, coeff=1, char=None):
        return cls(pres, {m: coeff}, char=char)

    def is_zero(self):
        return not self.terms

    def tridegree(self):
        """Common tridegree of all terms; None for the zero element."""
        degs = {tridegree(self.pres, m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlphabetError(f"inhomogeneous element: tridegrees {sorted(degs)}")
        return degs.pop()

    def add(self, other):
        assert self.pres is other.pres and self.char == other.char
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GradedElement(self.pres, out, char=self.char)

    def scale(self, c):
        return GradedElement(self.pres, {m: c * v for m, v in self.terms.items()}, char=self.char)

    def mul(self, other):
        assert self.pres is other.pres and self.char == other.char
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mul_monomials(self.pres, m1, m2)
                if m is not None:
                    out[m] = out.get(m, 0) + c1 * c2
        return GradedElement(self.pres, out, char=self.char)

    def mul_monomial(self, m: Monomial, coeff=1):
        return self.mul(GradedElement.monomial(self.pres, m, coeff, char=self.char))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=lambda mm: mm.exps):
            c = self.terms[m]
            s = monomial_str(self.pres, m)
            bits.append(s if c == 1 else f"{c}*{s}")
        return " + ".join(bits)


def multiply(a: GradedElement, b: GradedElement) -> GradedElement:
    """Product of homogeneous elements; tridegrees add."""
    a.tridegree()
    b.tridegree()
    return a.mul(b)


# ---------------------------------------------------------------------------
# degree-piece enumeration
# ---------------------------------------------------------------------------


def _ceil_div(a, b):
    return -((-a) // b)


def degree_basis(pres: Presentation, d: tuple):
    """Deterministic, duplicate-free basis of admissible monomials of tridegree d.

    Each family's admissibility region meets the degree hyperplane in a
    bounded set; the loops below carry explicit bounds, so enumeration always
    terminates.
    """
    s, t, w = d
    out = []
    if pres.family == "cone2":
        has_x = pres.has("x")
        has_u = pres.has("u")
        u_laurent = has_u and pres.generators[pres.index("u")].domain == "laurent"
        if t % 2 != 0 or t < 0 or (t != 0 and not has_x):
            return []
        k = t // 2 if has_x else 0

        def mono(th, ta, rh, uu, xx):
            e = [0] * len(pres.generators)
            e[pres.index("theta")] = th
            e[pres.index("tau")] = ta
            e[pres.index("rho")] = rh
            if has_u:
                e[pres.index("u")] = uu
            if has_x:
                e[pres.index("x")] = xx
            return Monomial(tuple(e))

        # theta = 0: s = -b - 2c, w = -a - b - c + k with a, b >= 0
        if has_u:
            c_hi = (-s) // 2  # b = -s - 2c >= 0
            c_lo = w - s - k  # a = -w + s + c + k >= 0
            if not u_laurent:
                c_lo = max(c_lo, 0)
            for c in range(c_lo, c_hi + 1):
                b = -s - 2 * c
                a = -w + s + c + k
                if a >= 0 and b >= 0:
                    out.append(mono(0, a, b, c, k))
        else:
            b = -s
            a = -w + s + k
            if a >= 0 and b >= 0:
                out.append(mono(0, a, b, 0, k))
        # theta = 1: s = b' - 2c, w = 2 + a' + b' - c + k with a', b' >= 0
        if has_u:
            c_lo = _ceil_div(-s, 2)  # b' = s + 2c >= 0
            c_hi = w - 2 - s - k  # a' = w - 2 - s - c - k >= 0
            if not u_laurent:
                c_lo = max(c_lo, 0)
            for c in range(c_lo, c_hi + 1):
                bp = s + 2 * c
                ap = w - 2 - s - c - k
                if ap >= 0 and bp >= 0:
                    out.append(mono(1, -ap, -bp, c, k))
        else:
            bp = s
            ap = w - 2 - s - k
            if ap >= 0 and bp >= 0:
                out.append(mono(1, -ap, -bp, 0, k))
    elif pres.family == "odd":
        # generators tau2 (laurent, (0,0,-4)), optional u (-2,0,-1), x (0,2,1)
        has_x = pres.has("x")
        has_u = pres.has("u")
        u_laurent = has_u and pres.generators[pres.index("u")].domain == "laurent"
        if t % 2 != 0 or t < 0 or (t != 0 and not has_x):
            return []
        k = t // 2 if has_x else 0
        if s % 2 != 0:
            return []
        c = (-s) // 2
        if not has_u:
            if c != 0:
                return []
            c = 0
        elif not u_laurent and c < 0:
            return []
        rem = -w - c + k  # 4a = k - c - w ... careful: w = -4a - c + k
        if rem % 4 != 0:
            return []
        a = rem // 4
        e = [0] * len(pres.generators)
        e[pres.index("tau2")] = a
        if has_u:
            e[pres.index("u")] = c
        if has_x:
            e[pres.index("x")] = k
        out.append(Monomial(tuple(e)))
    elif pres.family == "sym":
        # plain polynomial generators; bounded search on total s-degree
        degs = [g.tridegree for g in pres.generators]

        def rec(i, target, acc):
            if i == len(degs):
                if target == (0, 0, 0):
                    out.append(Monomial(tuple(acc)))
                return
            ds, dt, dw = degs[i]
            hi = min(
                (target[j] // dd for j, dd in ((0, ds), (1, dt), (2, dw)) if dd > 0),
                default=0,
            )
            lo = 0
            for e in range(lo, hi + 1):
                rec(i + 1, (target[0] - e * ds, target[1] - e * dt, target[2] - e * dw), acc + [e])

        # require all generator degrees to be positive along some axis
        if any(all(x <= 0 for x in g.tridegree) and any(x < 0 for x in g.tridegree) for g in pres.generators):
            raise AlphabetError("sym family requires positively graded generators")
        rec(0, (s, t, w), [])
    else:
        raise AlphabetError(f"unknown presentation family {pres.family!r}")
    out = sorted(set(out), key=lambda m: m.exps)
    for m in out:
        assert tridegree(pres, m) == d
    return out


def brute_degree_basis(pres: Presentation, d: tuple, bound=40):
    """Oracle enumeration over an explicit exponent box (tests only).

    Depth-first search over the box with interval pruning: a branch is cut
    when the remaining generators cannot reach the remaining degree even at
    their extreme exponents.  No degree equations are solved, so this stays
    independent of degree_basis.
    """
    ranges = []
    for g in pres.generators:
        if g.domain == "marker" or g.name == "theta":
            ranges.append((0, 1))
        elif g.domain == "laurent":
            ranges.append((-bound, bound))
        elif g.name in ("tau", "rho") and pres.family == "cone2":
            ranges.append((-bound, bound))
        else:
            ranges.append((0, bound))
    degs = [g.tridegree for g in pres.generators]
    n = len(degs)
    # suffix interval of achievable degree contributions, per coordinate
    suffix_lo = [[0, 0, 0] for _ in range(n + 1)]
    suffix_hi = [[0, 0, 0] for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        lo, hi = ranges[i]
        for c in range(3):
            vals = (lo * degs[i][c], hi * degs[i][c])
            suffix_lo[i][c] = suffix_lo[i + 1][c] + min(vals)
            suffix_hi[i][c] = suffix_hi[i + 1][c] + max(vals)

    out = []

    def dfs(i, rem, acc):
        for c in range(3):
            if not (suffix_lo[i][c] <= rem[c] <= suffix_hi[i][c]):
                return
        if i == n:
            if rem == (0, 0, 0):
                m = Monomial(tuple(acc))
                if is_admissible(pres, m):
                    out.append(m)
            return
        lo, hi = ranges[i]
        for e in range(lo, hi + 1):
            dfs(
                i + 1,
                (rem[0] - e * degs[i][0], rem[1] - e * degs[i][1], rem[2] - e * degs[i][2]),
                acc + [e],
            )

    dfs(0, d, [])
    return sorted(out, key=lambda m: m.exps)


# ---------------------------------------------------------------------------
# ModuleWindow and GradedMap
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Closed tridegree box."""

    s: tuple
    t: tuple
    w: tuple

    def contains(self, d):
        return (
            self.s[0] <= d[0] <= self.s[1]
            and self.t[0] <= d[1] <= self.t[1]
            and self.w[0] <= d[2] <= self.w[1]
        )

    def degrees(self):
        for s in range(self.s[0], self.s[1] + 1):
            for t in range(self.t[0], self.t[1] + 1):
                for w in range(self.w[0], self.w[1] + 1):
                    yield (s, t, w)


class ModuleWindow:
    """Finite map from tridegrees to bases of monomials (with base ring).

    ring: ("Fp", p) or ("Zq", q) or ("Z",); relation matrices are the evident
    diagonal ones and are reported in Smith normal form.
    """

    def __init__(self, pres: Presentation, window: Window, ring, pieces=None):
        self.pres = pres
        self.window = window
        self.ring = tuple(ring)
        if pieces is None:
            pieces = {}
            for d in window.degrees():
                basis = degree_basis(pres, d)
                if basis:
                    pieces[d] = basis
        self.pieces = pieces

    def basis(self, d):
        if not self.window.contains(d):
            raise WindowError(f"tridegree {d} outside window {self.window}")
        return self.pieces.get(d, [])

    def presented_module(self, d) -> PresentedModule:
        n = len(self.basis(d))
        if self.ring[0] == "Fp":
            return PresentedModule.mod_q(n, self.ring[1])
        if self.ring[0] == "Zq":
            return PresentedModule.mod_q(n, self.ring[1])
        return PresentedModule.free(n)

    def total_dimension(self):
        return sum(len(b) for b in self.pieces.values())


class GradedMap:
    """Per-degree integer matrices between two ModuleWindows.

    Columns are indexed by the source basis at d, rows by the target basis at
    d + shift.  Optionally remembers the generator images that induced it.
    """

    def __init__(self, source: ModuleWindow, target: ModuleWindow, shift=(0, 0, 0)):
        self.source = source
        self.target = target
        self.shift = tuple(shift)
        self.matrices = {}
        self.generator_images = {}

    def target_degree(self, d):
        return (d[0] + self.shift[0], d[1] + self.shift[1], d[2] + self.shift[2])

    def set_matrix(self, d, mat: Mat):
        assert mat.n == len(self.source.basis(d))
        assert mat.m == len(self.target.basis(self.target_degree(d)))
        self.matrices[d] = mat

    def matrix(self, d) -> Mat:
        if d in self.matrices:
            return self.matrices[d]
        return Mat(len(self.target.basis(self.target_degree(d))), len(self.source.basis(d)))

    def apply(self, d, coeffs):
        return self.matrix(d).mul_vec(coeffs)


def map_from_images(source: ModuleWindow, target: ModuleWindow, image_of_monomial, shift=(0, 0, 0)):
    """Build a GradedMap from a function Monomial -> GradedElement (over target.pres)."""
    f = GradedMap(source, target, shift)
    for d, basis in sorted(source.pieces.items()):
        td = f.target_degree(d)
        if not target.window.contains(td):
            continue
        tbasis = target.basis(td)
        tindex = {m: i for i, m in enumerate(tbasis)}
        mat = Mat(len(tbasis), len(basis))
        for j, m in enumerate(basis):
            img = image_of_monomial(m)
            if img is None or img.is_zero():
                continue
            assert img.tridegree() == td, (d, monomial_str(source.pres, m), img.tridegree(), td)
            for mm, c in img.terms.items():
                mat.rows[tindex[mm]][j] = c
        f.set_matrix(d, mat)
    return f


def kernel_cokernel(f: GradedMap, d: tuple):
    """Smith-normal-form presentations of ker/coker of the d-component."""
    if f.source.ring != f.target.ring:
        from .matrices import CoefficientError

        raise CoefficientError(f"base ring mismatch: {f.source.ring} vs {f.target.ring}")
    src = f.source.presented_module(d)
    tgt = f.target.presented_module(f.target_degree(d))
    return map_kernel_cokernel(f.matrix(d), src, tgt)


# ---------------------------------------------------------------------------
# JSON serialization (versioned, byte-stable)
# ---------------------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def presentation_to_obj(pres: Presentation):
    return {
        "name": pres.name,
        "family": pres.family,
        "char": pres.char,
        "generators": [
            {"name": g.name, "tridegree": list(g.tridegree), "domain": g.domain}
            for g in pres.generators
        ],
    }


def presentation_from_obj(obj) -> Presentation:
    gens = tuple(
        Generator(name=g["name"], tridegree=tuple(g["tridegree"]), domain=g["domain"])
        for g in obj["generators"]
    )
    return Presentation(name=obj["name"], family=obj["family"], char=obj["char"], generators=gens)


def window_to_json(mw: ModuleWindow) -> str:
    pieces = {}
    for d, basis in mw.pieces.items():
        key = f"{d[0]},{d[1]},{d[2]}"
        q = mw.ring[1] if len(mw.ring) > 1 else 0
        pieces[key] = {
            "basis": [monomial_str(mw.pres, m) for m in basis],
            "relations": [[q if i == j else 0 for j in range(len(basis))] for i in range(len(basis))]
            if q
            else [],
        }
    return _dumps(
        {
            "schema": SCHEMA_MODULEWINDOW,
            "presentation": presentation_to_obj(mw.pres),
            "ring": list(mw.ring),
            "window": {"s": list(mw.window.s), "t": list(mw.window.t), "w": list(mw.window.w)},
            "pieces": pieces,
        }
    )


def window_from_json(text: str) -> ModuleWindow:
    obj = json.loads(text)
    if obj.get("schema") != SCHEMA_MODULEWINDOW:
        raise ValueError(f"schema mismatch: {obj.get('schema')!r}")
    pres = presentation_from_obj(obj["presentation"])
    win = Window(
        s=tuple(obj["window"]["s"]), t=tuple(obj["window"]["t"]), w=tuple(obj["window"]["w"])
    )
    pieces = {}
    for key, rec in obj["pieces"].items():
        d = tuple(int(x) for x in key.split(","))
        pieces[d] = [parse_monomial(pres, s) for s in rec["basis"]]
    return ModuleWindow(pres, win, tuple(obj["ring"]), pieces=pieces)


def map_to_json(f: GradedMap) -> str:
    mats = {}
    for d, mat in f.matrices.items():
        mats[f"{d[0]},{d[1]},{d[2]}"] = mat.rows
    return _dumps(
        {
            "schema": SCHEMA_GRADEDMAP,
            "shift": list(f.shift),
            "source": json.loads(window_to_json(f.source)),
            "target": json.loads(window_to_json(f.target)),
            "matrices": mats,
            "generator_images": {
                k: str(v) for k, v in sorted(f.generator_images.items())
            },
        }
    )


def map_from_json(text: str) -> GradedMap:
    obj = json.loads(text)
    if obj.get("schema") != SCHEMA_GRADEDMAP:
        raise ValueError(f"schema mismatch: {obj.get('schema')!r}")
    source = window_from_json(_dumps(obj["source"]))
    target = window_from_json(_dumps(obj["target"]))
    f = GradedMap(source, target, tuple(obj["shift"]))
    for key, rows in obj["matrices"].items():
        d = tuple(int(x) for x in key.split(","))
        n = len(source.basis(d))
        m = len(target.basis(f.target_degree(d)))
        f.set_matrix(d, Mat(m, n, rows))
    return f
