"""Minimal graded free resolutions of the trivial module, and presets.

The generic builder iterates kernel computations starting from ``M_1``, the
column of generators.  The presets also carry hand-assembled resolutions
(block matrices built with :func:`star`) that serve as independent oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import QQ
from .freealg import Poly, make_presentation, word_str
from .gradedmod import (Complex, GradedFreeModule, ModuleError, ModuleMap,
                        kernel_generators, verify_complex)
from .rewrite import Algebra


# ---------------------------------------------------------------------------
# matrix utilities


def star(M, N, zero=None):
    """Overlay ``M`` (a x b) and ``N`` (c x d) sharing one row: (a+c-1) x (b+d).

    The last row of ``M`` and the first row of ``N`` become the same row.
    An empty ``M`` gives ``N`` back (and vice versa).
    """
    M = [list(r) for r in M]
    N = [list(r) for r in N]
    if not M:
        return N
    if not N:
        return M
    if zero is None:
        zero = Poly.zero(_gens_of(M) or _gens_of(N))
    a, b = len(M), len(M[0])
    c, d = len(N), len(N[0])
    out = [[zero] * (b + d) for _ in range(a + c - 1)]
    for i in range(a):
        out[i][:b] = M[i]
    for i in range(c):
        out[a - 1 + i][b:] = N[i]
    return out


def _gens_of(M):
    for r in M:
        for p in r:
            if isinstance(p, Poly):
                return p.gens
    return ()


def degree_vector(i, j):
    """The interval of shifts used by the explicit resolutions of the B presets."""
    lo = -((3 * j) // 2)
    if j <= i:
        hi = -j
    elif i % 2 == 0:
        hi = -(-(-3 * j) // 2) + i // 2
    else:
        hi = lo + i // 2
    return list(range(lo, hi + 1))


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class Resolution:
    """``Q_D -> ... -> Q_1 -> Q_0 = B`` together with what is certified about it.

    ``stage_certified[d]`` says whether the generators of ``Q_{d+1}`` are
    known in all internal degrees (not only up to ``N``).  ``finished`` means
    a zero module was reached, so the resolution is complete.
    """

    alg: Algebra
    complex: Complex
    D: int
    N: int
    stage_certified: list
    finished: bool

    @property
    def modules(self):
        return self.complex.modules

    def M(self, d):
        return self.complex.M(d)

    def betti(self):
        return self.complex.betti()

    @property
    def ended(self):
        """A zero module was reached (within the internal bound when not ``finished``)."""
        return self.finished or (self.complex.length > 0 and self.modules[-1].rank == 0)

    @property
    def truncated(self):
        return not all(self.stage_certified)

    def truncated_at(self):
        for d, ok in enumerate(self.stage_certified, start=1):
            if not ok:
                return d + 1
        return None

    def shifts(self, d):
        if d > self.complex.length:
            if self.finished:
                return ()
            raise ModuleError("homological degree %d beyond the certified bound %d" % (d, self.D))
        return self.modules[d].shifts


def generator_column(alg):
    rows = [[alg.gen(i)] for i in range(alg.ngens)]
    return rows


def minimal_resolution(alg: Algebra, D, N) -> Resolution:
    """Minimal free resolution of the trivial module through ``Q_D``.

    Kernel generators are searched in internal degrees ``<= N``; stages
    where that does not provably capture all of them are flagged.
    """
    alg.check_degree(N)
    Q0 = GradedFreeModule(alg, [0])
    Q1 = GradedFreeModule(alg, [-1] * alg.ngens)
    modules = [Q0, Q1]
    maps = [ModuleMap(Q1, Q0, generator_column(alg))]
    certified = []
    finished = False
    for d in range(1, D):
        kr = kernel_generators(maps[-1], N)
        certified.append(kr.complete)
        gens = kr.generators
        Qn = GradedFreeModule(alg, [-g.degree() for g in gens])
        modules.append(Qn)
        maps.append(ModuleMap(Qn, modules[-2], [g.entries for g in gens], check=False))
        if not gens:
            finished = kr.complete
            break
    cx = Complex(modules, maps, (D, N))
    return Resolution(alg, cx, D, N, certified, finished)


def left_annihilator(alg: Algebra, x: Poly, N):
    """Minimal homogeneous generators of ``{w : w x = 0}`` of degree ``<= N``."""
    x = alg.normal_form(x)
    k = x.degree()
    src = GradedFreeModule(alg, [-k])
    tgt = GradedFreeModule(alg, [0])
    M = ModuleMap(src, tgt, [[x]])
    kr = kernel_generators(M, N + k)
    return [g.entries[0] for g in kr.generators]


def euler_characteristic(res: Resolution, N=None):
    """Coefficients of ``sum_d (-1)^d sum_l t^(-d_l) * H(t)`` up to ``t^top``.

    ``top`` is ``N`` once a zero module has been reached (all generators of
    degree ``<= N`` are then known) and ``min(N, D)`` otherwise; the product
    is ``1`` there exactly when the Betti data is right.
    """
    N = res.N if N is None else N
    top = N if res.ended else min(N, res.complex.length)
    H = res.alg.hilbert(top)
    P = [0] * (top + 1)
    for d, Q in enumerate(res.modules):
        for s in Q.shifts:
            if -s <= top:
                P[-s] += (-1) ** d
    out = [sum(P[a] * H[m - a] for a in range(m + 1)) for m in range(top + 1)]
    return out, top


# ---------------------------------------------------------------------------
# presets


def b_gen_names(n):
    out = []
    for i in range(n + 1):
        out += ["a%d" % i, "b%d" % i, "c%d" % i]
    return out


def b_presentation(n, field=QQ):
    gens = b_gen_names(n)
    g = {name: Poly.word((i,), gens) for i, name in enumerate(gens)}

    def w(*names):
        p = Poly.scalar(1, gens)
        for s in names:
            p = p * g[s]
        return p

    a = lambda i: "a%d" % i
    b = lambda i: "b%d" % i
    c = lambda i: "c%d" % i
    rels = [w(a(n), b(n), c(n)), w(c(0), a(0))]
    for i in range(n):
        rels += [w(a(i), b(i), c(i)) + w(c(i + 1), a(i + 1), b(i + 1)),
                 w(b(i + 1), c(i + 1), a(i + 1)),
                 w(c(i), c(i + 1)),
                 w(b(i + 1), a(i))]
    return make_presentation(gens, rels, field)


def _words_presentation(gens, words, field=QQ):
    rels = []
    for s in words:
        rels.append(Poly.word(tuple(gens.index(ch) for ch in s), gens))
    return make_presentation(gens, rels, field)


A1_WORDS = ("yyzx", "zxx", "yyw")
A2_WORDS = ("yyz", "zxx", "yyww")
# dual basis order R_1, R_2, R_3 used to name E^2 classes
A1_DUAL_ORDER = ("yyw", "zxx", "yyzx")
A2_DUAL_ORDER = ("yyz", "zxx", "yyww")


def koszul2_presentation(field=QQ):
    gens = ("x", "y")
    x, y = Poly.word((0,), gens), Poly.word((1,), gens)
    return make_presentation(gens, [x * y - y * x], field)


def koszulmono2_presentation(field=QQ):
    return _words_presentation(("x", "y"), ("xx", "yy"), field)


PRESET_NAMES = ("B<n>", "A1", "A2", "koszul2", "koszulmono2")

_ALIASES = {"koszul_commutative2": "koszul2", "koszul_monomial2": "koszulmono2"}


@dataclass
class PresetBundle:
    name: str
    alg: Algebra
    explicit: Complex | None = None
    labels: dict = dc_field(default_factory=dict)
    n: int | None = None

    def label_resolution(self, res: Resolution, top=3):
        """Names for the dual basis elements of the generic resolution.

        Returns ``{(p, l): name}``.  Degree-1 classes are named after the
        generators; degree-2 classes after the relation their row encodes,
        when a preset supplies names for relations; the remaining classes get
        ``e<p>_<l>``.
        """
        out = {}
        alg = self.alg
        names = self.labels
        for p in range(1, min(top, res.complex.length) + 1):
            for l in range(res.modules[p].rank):
                out[(p, l)] = "e%d_%d" % (p, l)
        if res.complex.length >= 1:
            for l in range(res.modules[1].rank):
                out[(1, l)] = names.get(("gen", l), "e1_%d" % l)
        if res.complex.length >= 2:
            for l, row in enumerate(res.M(2).matrix):
                rel = Poly.zero(alg.gens)
                for j, p in enumerate(row):
                    rel = rel + p * alg.gen(j)
                key = rel.words()[0] if rel else None
                if ("rel", key) in names:
                    out[(2, l)] = names[("rel", key)]
        if res.complex.length >= 3:
            for l in range(res.modules[3].rank):
                if ("top", 3) in names and res.modules[3].rank == 1:
                    out[(3, l)] = names[("top", 3)]
        return out


def _normalize(name):
    return _ALIASES.get(name, name)


def preset(name, field=QQ, D=None) -> PresetBundle:
    """Algebra, explicit resolution (when known) and class names for a preset.

    ``D`` bounds the explicit periodic complexes of the B presets
    (default 8).
    """
    name = _normalize(name)
    if name.startswith("B") and name[1:].lstrip("(").rstrip(")").isdigit():
        n = int(name[1:].lstrip("(").rstrip(")"))
        alg = Algebra.from_presentation(b_presentation(n, field))
        bundle = PresetBundle("B%d" % n, alg, n=n)
        gens = alg.gens
        letters = {"a": "alpha", "b": "beta", "c": "gamma"}
        for i, g in enumerate(gens):
            bundle.labels[("gen", i)] = letters[g[0]] + g[1:]
        bundle.explicit = explicit_b_complex(alg, n, D or 8)
        return bundle
    if name in ("A1", "A2"):
        words = A1_WORDS if name == "A1" else A2_WORDS
        order = A1_DUAL_ORDER if name == "A1" else A2_DUAL_ORDER
        t = name[1]
        alg = Algebra.from_presentation(_words_presentation(("x", "y", "z", "w"), words, field))
        bundle = PresetBundle(name, alg)
        for i, g in enumerate(alg.gens):
            bundle.labels[("gen", i)] = g.upper()
        for k, s in enumerate(order, start=1):
            bundle.labels[("rel", tuple("xyzw".index(ch) for ch in s))] = "R%s_%d" % (t, k)
        bundle.labels[("top", 3)] = "alpha%s" % t
        bundle.explicit = explicit_a_complex(alg, name)
        return bundle
    if name == "koszul2":
        return PresetBundle(name, Algebra.from_presentation(koszul2_presentation(field)))
    if name == "koszulmono2":
        return PresetBundle(name, Algebra.from_presentation(koszulmono2_presentation(field)))
    raise ValueError("unknown preset %r (choose from %s)" % (name, ", ".join(PRESET_NAMES)))


# ---------------------------------------------------------------------------
# explicit complexes


def _infer_shifts(alg, rows, target_shifts):
    shifts = []
    for i, r in enumerate(rows):
        found = None
        for j, p in enumerate(r):
            if p:
                s = target_shifts[j] - p.degree()
                if found is not None and found != s:
                    raise ModuleError("row %d has entries of inconsistent degree" % i)
                found = s
        if found is None:
            raise ModuleError("row %d is zero; cannot infer its shift" % i)
        shifts.append(found)
    return shifts


def complex_from_matrices(alg, mats):
    """Complex ``Q_0 = B`` with ``M_1, M_2, ...`` given as lists of rows."""
    modules = [GradedFreeModule(alg, [0])]
    maps = []
    for rows in mats:
        shifts = _infer_shifts(alg, rows, modules[-1].shifts)
        Q = GradedFreeModule(alg, shifts)
        maps.append(ModuleMap(Q, modules[-1], rows))
        modules.append(Q)
    return Complex(modules, maps)


def explicit_a_complex(alg, name):
    z = Poly.zero(alg.gens)
    x, y, zz, w = (alg.gen(i) for i in range(4))
    yy = y * y
    M1 = [[x], [y], [zz], [w]]
    if name == "A1":
        M2 = [[z, z, z, yy], [zz * x, z, z, z], [yy * zz, z, z, z]]
    else:
        M2 = [[z, z, yy, z], [zz * x, z, z, z], [z, z, z, yy * w]]
    M3 = [[z, yy, z]]
    return complex_from_matrices(alg, [M1, M2, M3])


class _BBlocks:
    """The building blocks of the explicit resolution for the B presets."""

    def __init__(self, alg, n):
        self.alg, self.n = alg, n
        self.zero = Poly.zero(alg.gens)

    def g(self, letter, i):
        return self.alg.gen(3 * i + "abc".index(letter))

    def w(self, *pairs):
        p = Poly.scalar(1, self.alg.gens)
        for letter, i in pairs:
            p = p * self.g(letter, i)
        return p

    def gamma(self, i):
        if i == 0:
            return [[self.w(("a", 0), ("b", 0))]]
        return [[self.w(("a", i), ("b", i))], [self.g("c", i - 1)]]

    def star_gamma(self, M, i):
        if i < 0:
            return M
        return star(M, self.gamma(i), self.zero)

    def R(self, p):
        n = self.n
        M = self.gamma(n)
        for j in range(1, (n - p) // 2 + 1):
            M = self.star_gamma(M, n - 2 * j)
        return M

    def U(self, e):
        n, p = self.n, e + 1
        M = [[self.g("c", n)]]
        for j in range(0, (n - p) // 2 + 1):
            M = self.star_gamma(M, n - 2 * j - 1)
        return M

    def S(self, i, e):
        p = e + 1
        M = [[self.w(("c", i), ("a", i))]]
        for j in range(0, (i - p) // 2 + 1):
            M = self.star_gamma(M, i - 2 * j - 1)
        return M

    def T(self, i, p):
        M = [[self.g("b", i)], [self.g("c", i - 1)]]
        for j in range(1, (i - p) // 2 + 1):
            M = self.star_gamma(M, i - 2 * j)
        return M

    # each summand: (rank of its Q_1, function d -> M_d block for d >= 2, or None)
    def summands(self):
        n = self.n
        out = []
        w, g = self.w, self.g
        if n == 0:
            out.append(lambda d: [[g("c", 0)]] if d % 2 == 0 else [[w(("a", 0), ("b", 0))]])
        else:
            out.append(lambda d: [[g("c", 0)], [g("b", 1)]] if d % 2 == 0
                       else [[w(("a", 0), ("b", 0)), w(("c", 1), ("a", 1))]])
            for i in range(1, n):
                out.append(lambda d, i=i: [[w(("b", i), ("c", i))], [g("b", i + 1)]] if d % 2 == 0
                           else [[g("a", i), w(("c", i + 1), ("a", i + 1))]])
            out.append(lambda d: [[w(("b", n), ("c", n))]] if d % 2 == 0 else [[g("a", n)]])
        par = n % 2

        def c_block(d):
            k = d // 2
            if d % 2 == 0:
                return self.R(max(n - 2 * k + 2, par))
            return self.U(max(n - 2 * k + 1, 1 - par))
        out.append(c_block)
        for i in range(n, 0, -1):
            def q_block(d, i=i):
                k = d // 2
                if d % 2 == 0:
                    return self.S(i, max(i - 2 * k + 1, 1 - i % 2))
                return self.T(i, max(i - 2 * k, i % 2))
            out.append(q_block)
        out.append(None)
        return out

    def m1(self):
        n, g = self.n, self.g
        col = [g("a", i) for i in range(n + 1)] + [g("c", n)]
        for i in range(n, 0, -1):
            col += [g("b", i), g("c", i - 1)]
        col.append(g("b", 0))
        return [[e] for e in col]


def _block_diag(blocks, zero):
    """Block-diagonal matrix from ``(rows, cols, matrix)`` triples."""
    ncols = sum(c for _, c, _ in blocks)
    out = []
    off = 0
    for r, c, M in blocks:
        for row in M:
            full = [zero] * ncols
            full[off:off + c] = row
            out.append(full)
        off += c
    return out


def explicit_b_complex(alg, n, D):
    """The hand-built resolution of the trivial module for the B presets."""
    bb = _BBlocks(alg, n)
    parts = bb.summands()
    mats = [bb.m1()]
    ranks = [1] * (n + 1) + [1] + [2] * n + [1]
    for d in range(2, D + 1):
        blocks, new = [], []
        for f, r in zip(parts, ranks):
            if f is None or r == 0:
                blocks.append((0, r, []))
                new.append(0)
                continue
            M = f(d)
            if len(M[0]) != r:
                raise ModuleError("explicit block has %d columns, expected %d" % (len(M[0]), r))
            blocks.append((len(M), r, M))
            new.append(len(M))
        mats.append(_block_diag(blocks, bb.zero))
        ranks = new
    return complex_from_matrices(alg, mats)


def betti_multisets(cx: Complex):
    return [tuple(sorted(Q.shifts)) for Q in cx.modules]


def check_explicit(bundle: PresetBundle, N):
    """verify_complex at every position of the preset's explicit complex."""
    cx = bundle.explicit
    return [verify_complex(cx, d, N) for d in range(0, cx.length)]


def describe_betti(res):
    return [{"d": d, "shifts": list(Q.shifts)} for d, Q in enumerate(res.modules)]


def gens_str(alg, w):
    return word_str(w, alg.gens)
