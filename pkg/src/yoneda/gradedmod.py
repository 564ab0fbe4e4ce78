"""Graded free modules, degree-0 maps between them, and complexes.

Conventions: ``B(d_1, ..., d_r)`` has basis element ``l`` in internal degree
``-d_l``.  A map is a matrix acting by right multiplication on row vectors,
so ``compose_maps(M, N)`` (first ``M``, then ``N``) is the matrix ``M N`` and
entry ``(i, j)`` of a map ``B(d) -> B(D)`` has degree ``D_j - d_i``.

Kernels are computed degreewise over the normal-word basis.  To decide how
far that has to go, :func:`locality_degree` looks for a degree ``c`` such that
right multiplication by the matrix only ever rewrites the last ``c + d_l``
letters of a source word.  Once that holds every kernel element of degree
above ``c`` is a left multiple of kernel elements of degree ``c``, so kernel
generators all live in degrees ``<= c`` and slices beyond ``c`` are never
needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .freealg import Poly
from .linalg import Echelon, left_kernel
from .rewrite import Algebra


class ModuleError(ValueError):
    pass


class GradedFreeModule:
    def __init__(self, alg: Algebra, shifts):
        self.alg = alg
        self.shifts = tuple(int(s) for s in shifts)
        self._slices = {}

    @property
    def rank(self):
        return len(self.shifts)

    def gen_degrees(self):
        return [-d for d in self.shifts]

    def __eq__(self, other):
        return (isinstance(other, GradedFreeModule) and other.alg is self.alg
                and other.shifts == self.shifts)

    def __hash__(self):
        return hash(self.shifts)

    def __repr__(self):
        return "B(%s)" % ",".join(map(str, self.shifts))

    def slice_basis(self, q):
        """``[(l, word)]`` spanning the internal-degree-``q`` part, and its index."""
        got = self._slices.get(q)
        if got is None:
            basis = []
            for l, d in enumerate(self.shifts):
                m = q + d
                if m >= 0:
                    basis.extend((l, w) for w in self.alg.basis(m))
            got = (basis, {b: i for i, b in enumerate(basis)})
            self._slices[q] = got
        return got

    def slice_dim(self, q):
        return sum(self.alg.dim(q + d) for d in self.shifts)

    def element(self, entries):
        return ModuleElement(self, tuple(entries))

    def zero(self):
        z = Poly.zero(self.alg.gens)
        return ModuleElement(self, (z,) * self.rank)

    def vector_to_element(self, vec, q):
        """Slice coordinates (``dict index -> coeff``) back to a row vector."""
        basis = self.slice_basis(q)[0]
        entries = [dict() for _ in range(self.rank)]
        for i, c in vec.items():
            l, w = basis[i]
            entries[l][w] = c
        return ModuleElement(self, tuple(self.alg.element(e) for e in entries))

    def element_to_vector(self, elem, q):
        index = self.slice_basis(q)[1]
        vec = {}
        for l, p in enumerate(elem.entries):
            for w, c in p.terms.items():
                vec[index[(l, w)]] = c
        return vec


@dataclass(frozen=True)
class ModuleElement:
    module: GradedFreeModule
    entries: tuple

    def degree(self):
        """Internal degree of a homogeneous nonzero element."""
        degs = set()
        for l, p in enumerate(self.entries):
            for w in p.terms:
                degs.add(len(w) - self.module.shifts[l])
        if len(degs) != 1:
            raise ModuleError("element is zero or inhomogeneous")
        return degs.pop()

    def is_zero(self):
        return not any(self.entries)

    def left_mul(self, p: Poly):
        alg = self.module.alg
        return ModuleElement(self.module, tuple(alg.mul(p, e) for e in self.entries))

    def to_str(self):
        alg = self.module.alg
        return "(" + ", ".join(alg.str(e) for e in self.entries) + ")"

    def __repr__(self):
        return self.to_str()


class ModuleMap:
    """Degree-0 homomorphism ``source -> target`` given by a matrix over the algebra."""

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, matrix, check=True):
        self.source = source
        self.target = target
        self.alg = source.alg
        rows = tuple(tuple(r) for r in matrix)
        if len(rows) != source.rank or any(len(r) != target.rank for r in rows):
            raise ModuleError("matrix shape %dx%s does not match %r -> %r"
                              % (len(rows), {len(r) for r in rows} or "?", source, target))
        if check:
            for i, r in enumerate(rows):
                for j, p in enumerate(r):
                    if not p:
                        continue
                    want = target.shifts[j] - source.shifts[i]
                    if p.degrees() != {want}:
                        raise ModuleError("entry (%d,%d) = %s must have degree %d"
                                          % (i, j, self.alg.str(p), want))
                    if self.alg.normal_form(p) != p:
                        raise ModuleError("entry (%d,%d) is not in normal form" % (i, j))
        self.matrix = rows
        self._slices = {}

    @classmethod
    def from_rows(cls, source, target, rows):
        return cls(source, target, [e.entries for e in rows])

    def __repr__(self):
        return "ModuleMap(%r -> %r)" % (self.source, self.target)

    def entry(self, i, j):
        return self.matrix[i][j]

    def is_zero(self):
        return not any(p for r in self.matrix for p in r)

    def apply(self, elem: ModuleElement) -> ModuleElement:
        alg = self.alg
        out = [Poly.zero(alg.gens) for _ in range(self.target.rank)]
        for i, x in enumerate(elem.entries):
            if not x:
                continue
            for j, m in enumerate(self.matrix[i]):
                if m:
                    out[j] = out[j] + alg.mul(x, m)
        return ModuleElement(self.target, tuple(out))

    def to_str(self):
        alg = self.alg
        return "\n".join("[" + ", ".join(alg.str(p) for p in r) + "]" for r in self.matrix)

    def slice(self, q):
        got = self._slices.get(q)
        if got is None:
            got = degree_slice(self, q)
            self._slices[q] = got
        return got


def identity_map(Q: GradedFreeModule):
    alg = Q.alg
    rows = [[Poly.scalar(1, alg.gens) if i == j else Poly.zero(alg.gens)
             for j in range(Q.rank)] for i in range(Q.rank)]
    return ModuleMap(Q, Q, rows)


def compose_maps(M: ModuleMap, N: ModuleMap) -> ModuleMap:
    """First ``M`` then ``N``: the matrix product ``M N``."""
    if M.target != N.source:
        raise ModuleError("cannot compose %r with %r" % (M, N))
    alg = M.alg
    zero = Poly.zero(alg.gens)
    rows = []
    for i in range(M.source.rank):
        row = []
        for j in range(N.target.rank):
            acc = zero
            for k in range(M.target.rank):
                a, b = M.matrix[i][k], N.matrix[k][j]
                if a and b:
                    acc = acc + alg.mul(a, b)
            row.append(acc)
        rows.append(row)
    return ModuleMap(M.source, N.target, rows, check=False)


@dataclass
class Slice:
    """The K-linear map of one internal degree, rows = source slice basis."""

    q: int
    rows: list
    row_basis: list
    col_basis: list

    def to_dense(self):
        out = [[0] * len(self.col_basis) for _ in self.rows]
        for i, r in enumerate(self.rows):
            for j, c in r.items():
                out[i][j] = c
        return out

    @property
    def shape(self):
        return (len(self.row_basis), len(self.col_basis))


def degree_slice(M: ModuleMap, q) -> Slice:
    alg = M.alg
    alg.check_degree(q + max(M.target.shifts, default=0))
    rb = M.source.slice_basis(q)[0]
    cb, cidx = M.target.slice_basis(q)
    nf = alg.nf_word
    rows = []
    for l, w in rb:
        vec = {}
        for j, m in enumerate(M.matrix[l]):
            for v, a in m.terms.items():
                for x, b in nf(w + v).items():
                    k = cidx[(j, x)]
                    s = vec.get(k, 0) + a * b
                    if s:
                        vec[k] = s
                    else:
                        vec.pop(k, None)
        rows.append(vec)
    return Slice(q, rows, rb, cb)


# ---------------------------------------------------------------------------
# locality certificate


def _contexts(alg):
    k = alg.max_lead - 1
    out = []
    for m in range(0, k + 1):
        out.extend(alg.basis(m))
    return out


def locality_degree(M: ModuleMap, extra=6):
    """Smallest ``c`` such that right multiplication by ``M`` is suffix-local.

    Tries ``c`` from the top generator degree of the source up to ``extra``
    beyond it; returns None if none works.  See the module docstring.
    """
    alg = M.alg
    src = M.source
    if src.rank == 0:
        return 0
    k = alg.max_lead - 1
    ctx = _contexts(alg)
    c0 = max(0, max(-d for d in src.shifts))
    normal_cache = {}

    def normal(w):
        got = normal_cache.get(w)
        if got is None:
            got = normal_cache[w] = alg.is_normal(w)
        return got

    for c in range(c0, c0 + extra + 1):
        pairs = set()
        for l, d in enumerate(src.shifts):
            a = c + d
            for s in alg.basis(a):
                sp = s[:k]
                for m in M.matrix[l]:
                    if not m:
                        continue
                    for v in m.terms:
                        for t in alg.nf_word(s + v):
                            pairs.add((sp, t[:k]))
        ok = True
        for sp, tp in pairs:
            if sp == tp:
                continue
            for p in ctx:
                if normal(p + sp) and not normal(p + tp):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return c
    return None


# ---------------------------------------------------------------------------
# kernels


@dataclass
class KernelResult:
    generators: list
    searched_to: int
    locality: int | None

    @property
    def complete(self):
        """True when the generators provably generate the whole kernel."""
        return self.locality is not None and self.locality <= self.searched_to


def kernel_generators(M: ModuleMap, N) -> KernelResult:
    """Minimal homogeneous generators of ``ker M`` in degrees ``<= N``.

    The search stops early at the locality degree when one exists; the
    result records whether the generator list is complete in all degrees.
    """
    alg = M.alg
    src = M.source
    loc = locality_degree(M)
    top = N if loc is None else min(N, loc)
    if src.rank == 0:
        return KernelResult([], top, loc)
    qmin = min(-d for d in src.shifts)
    gens = []
    for q in range(qmin, top + 1):
        sl = M.slice(q)
        if not sl.rows:
            continue
        kern = left_kernel(sl.rows, alg.field)
        if not kern:
            continue
        span = Echelon(alg.field)
        for g in gens:
            for w in alg.basis(q - g.degree()):
                if not w:
                    continue
                span.add(src.element_to_vector(g.left_mul(alg.element({w: 1})), q))
        for kv in kern:
            if span.add(kv) is not None:
                gens.append(src.vector_to_element(kv, q))
    return KernelResult(gens, top, loc)


def kernel_minimal_generators(M: ModuleMap, N):
    return kernel_generators(M, N).generators


# ---------------------------------------------------------------------------
# complexes


@dataclass
class Complex:
    """``Q_D -> ... -> Q_1 -> Q_0``; ``maps[d-1]`` is ``M_d : Q_d -> Q_{d-1}``."""

    modules: list
    maps: list
    bounds: tuple = (None, None)

    def __post_init__(self):
        if len(self.maps) != len(self.modules) - 1:
            raise ModuleError("a complex with %d modules needs %d maps"
                              % (len(self.modules), len(self.modules) - 1))
        for d, M in enumerate(self.maps, start=1):
            if M.source != self.modules[d] or M.target != self.modules[d - 1]:
                raise ModuleError("map M_%d does not connect Q_%d -> Q_%d" % (d, d, d - 1))

    @property
    def length(self):
        return len(self.modules) - 1

    def M(self, d):
        return self.maps[d - 1]

    def betti(self):
        return [tuple(Q.shifts) for Q in self.modules]


@dataclass
class ComplexReport:
    position: int
    is_complex: bool
    is_minimal: bool
    is_exact_at: bool
    exact_through: float
    details: list = dc_field(default_factory=list)


def _is_minimal(M: ModuleMap):
    return all(() not in p.terms for r in M.matrix for p in r)


def verify_complex(C: Complex, position, N) -> ComplexReport:
    """d^2 = 0 around ``position``, minimality of the incoming map, and
    exactness at ``Q_position`` up to internal degree ``N``.

    Exactness compares ``dim ker`` with ``rank im`` slice by slice.  When the
    outgoing map is suffix-local at degree ``c <= N`` the kernel is generated
    by degrees ``<= c`` and ``exact_through`` is infinite.
    """
    alg = C.modules[0].alg
    details = []
    d = position
    is_cx = True
    for e in (d, d + 1):
        if 2 <= e <= C.length:
            if not compose_maps(C.M(e), C.M(e - 1)).is_zero():
                is_cx = False
                details.append("M_%d M_%d != 0" % (e, e - 1))
    is_min = True
    for e in (d, d + 1):
        if 1 <= e <= C.length and not _is_minimal(C.M(e)):
            is_min = False
            details.append("M_%d has a scalar entry" % e)
    exact = True
    through = -1
    if d == 0:
        if C.length >= 1:
            sl = C.M(1).slice(1)
            r = Echelon(alg.field)
            for row in sl.rows:
                r.add(row)
            exact = r.rank == alg.ngens
            through = math.inf if exact else 0
        else:
            exact = False
    elif d >= C.length:
        exact = False
        details.append("no outgoing map at Q_%d" % d)
    else:
        Md, Mn = C.M(d), C.M(d + 1)
        loc = locality_degree(Md)
        top = N if loc is None else min(N, loc)
        qmin = min((-s for s in C.modules[d].shifts), default=0)
        for q in range(qmin, top + 1):
            sl = Md.slice(q)
            ker = len(left_kernel(sl.rows, alg.field)) if sl.rows else 0
            im = Echelon(alg.field)
            for row in Mn.slice(q).rows:
                im.add(row)
            if im.rank != ker:
                exact = False
                details.append("degree %d: dim ker %d != rank im %d" % (q, ker, im.rank))
                break
        if exact:
            through = math.inf if (loc is not None and loc <= N) else N
    return ComplexReport(d, is_cx, is_min, exact and is_cx, through, details)
