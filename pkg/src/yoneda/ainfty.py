"""A-infinity structure on the Ext algebra via homotopy transfer.

Let ``Q`` be a minimal resolution of the trivial module.  Cochains of degree
``n`` are families ``f_j : Q_j -> Q_{j-n}``; composition makes them a dg
algebra ``U`` whose cohomology is the Ext algebra.  Everything here works in
the window ``j <= J``.  Each component ``f_j`` only depends on components of
lower index, so values do not change when the window grows.

Conventions (row vectors, matrices act on the right):

* ``(d f)_j = F_j M_{j-n} - (-1)^n M_j F_{j-1}``
* ``f g`` (apply ``g`` first) has ``(f g)_j = G_j F_{j-|g|}``
* ``p(f)`` reads off the scalar parts of ``F_n``, the map ``Q_n -> Q_0``
* ``i(mu)`` starts with a scalar column and is lifted by solving the squares
* ``G`` is built from a linear section of ``d`` on coboundaries, which gives
  ``1 - i p = d G + G d`` and ``G G = G i = p G = 0``.

Products come from the recursion ``m_k = p lambda_k`` with ``G lambda_1 = -i``
and ``lambda_k`` a signed sum of compositions ``(G lambda_a)(G lambda_b)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from itertools import product

from .freealg import Poly
from .linalg import Echelon, left_kernel


class SDRError(RuntimeError):
    """The homotopy data could not be built or failed verification."""


class WindowError(ValueError):
    """A value was requested outside the computed window."""


# ---------------------------------------------------------------------------
# sparse matrices over the algebra: {row: {col: Poly}}


def _radd(acc, row, c=1):
    for k, p in row.items():
        q = acc.get(k)
        q = p.scale(c) if q is None else q + p.scale(c)
        if q:
            acc[k] = q
        else:
            acc.pop(k, None)


def _matmul(alg, A, B):
    out = {}
    for i, row in A.items():
        acc = {}
        for k, a in row.items():
            brow = B.get(k)
            if not brow:
                continue
            for l, b in brow.items():
                x = alg.mul(a, b)
                if not x:
                    continue
                q = acc.get(l)
                q = x if q is None else q + x
                if q:
                    acc[l] = q
                else:
                    acc.pop(l, None)
        if acc:
            out[i] = acc
    return out


def _madd(A, B, c=1):
    out = {i: dict(r) for i, r in A.items()}
    for i, r in B.items():
        acc = out.setdefault(i, {})
        _radd(acc, r, c)
        if not acc:
            del out[i]
    return out


def _mscale(A, c):
    if not c:
        return {}
    return {i: {k: p.scale(c) for k, p in r.items()} for i, r in A.items()}


class Cochain:
    """Degree ``n`` element of the windowed endomorphism complex.

    ``comps[j]`` is the sparse matrix of ``f_j : Q_j -> Q_{j-n}``; missing
    components are zero.
    """

    __slots__ = ("n", "comps")

    def __init__(self, n, comps=None):
        self.n = n
        self.comps = {j: m for j, m in (comps or {}).items() if m}

    def is_zero(self):
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def __add__(self, other):
        return self.axpy(1, other)

    def __sub__(self, other):
        return self.axpy(-1, other)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return Cochain(self.n, {j: _mscale(m, c) for j, m in self.comps.items()})

    def axpy(self, c, other):
        if other.is_zero():
            return self
        if self.is_zero():
            return other.scale(c)
        if other.n != self.n:
            raise ValueError("adding cochains of degrees %d and %d" % (self.n, other.n))
        comps = dict(self.comps)
        for j, m in other.comps.items():
            comps[j] = _madd(comps.get(j, {}), m, c)
        return Cochain(self.n, comps)

    def __eq__(self, other):
        return isinstance(other, Cochain) and (self - other).is_zero()

    def __repr__(self):
        return "Cochain(n=%d, %s)" % (self.n, sorted(self.comps))


@dataclass
class ExtClass:
    """Element of ``Ext^n``: coordinates over the dual basis of ``Q_n``."""

    n: int
    coords: dict

    def is_zero(self):
        return not any(self.coords.values())

    def items(self):
        return sorted((l, c) for l, c in self.coords.items() if c)

    def terms(self):
        return [((self.n, l), c) for l, c in self.items()]


# ---------------------------------------------------------------------------
# homotopy data


class SDR:
    """Maps ``i``, ``p``, ``G`` on the window ``Q_0, ..., Q_J`` of a resolution."""

    def __init__(self, res, J):
        if J > res.complex.length and not res.ended:
            raise WindowError("window %d exceeds the resolution (length %d)"
                              % (J, res.complex.length))
        self.res = res
        self.alg = res.alg
        self.J = J
        L = res.complex.length
        self.modules = [res.modules[j] if j <= L else None for j in range(J + 1)]
        self.rank = [m.rank if m is not None else 0 for m in self.modules]
        self.deg = [[-s for s in m.shifts] if m is not None else [] for m in self.modules]
        self.mats = [None]
        for d in range(1, J + 1):
            if d <= L:
                M = res.M(d)
                self.mats.append({i: {k: p for k, p in enumerate(r) if p}
                                  for i, r in enumerate(M.matrix)})
            else:
                self.mats.append({})
        self._solvers = {}
        self._lifts = {}
        self._lock = threading.RLock()

    @property
    def exhaustive(self):
        """True when the resolution stops inside the window, so nothing lies beyond it."""
        top = max((j for j in range(self.J + 1) if self.rank[j]), default=0)
        return self.res.ended and top < self.J

    # -- bookkeeping ---------------------------------------------------
    def comp_range(self, n):
        return range(max(0, n), min(self.J, self.J + n) + 1)

    def M(self, d):
        if 1 <= d <= self.J:
            return self.mats[d]
        return {}

    def weight_present(self, n, w):
        """Whether windowed cochains of degree ``n`` and internal weight ``w`` exist."""
        for j in self.comp_range(n):
            for a in self.deg[j]:
                for b in self.deg[j - n]:
                    if a - b - w >= 0:
                        return True
        return False

    def ext_dim(self, n, w=None):
        if not 0 <= n <= self.J:
            return 0
        if w is None:
            return self.rank[n]
        return sum(1 for q in self.deg[n] if q == w)

    # -- linear solves -----------------------------------------------------
    def _solver(self, d, q):
        key = (d, q)
        got = self._solvers.get(key)
        if got is None:
            Md = self.res.M(d)
            sl = Md.slice(q)
            ech = Echelon(self.alg.field, track=True)
            for i, row in enumerate(sl.rows):
                ech.add(row, label=i)
            got = (ech, sl)
            self._solvers[key] = got
        return got

    def solve_row(self, d, y):
        """A row ``x`` over ``Q_d`` with ``x M_d = y`` (``y`` a row over ``Q_{d-1}``)."""
        parts = {}
        for k, p in y.items():
            for w, c in p.terms.items():
                parts.setdefault(len(w) + self.deg[d - 1][k], []).append((k, w, c))
        out = {}
        for q in sorted(parts):
            ech, sl = self._solver(d, q)
            index = self.modules[d - 1].slice_basis(q)[1]
            vec = {index[(k, w)]: c for k, w, c in parts[q]}
            x = ech.solve(vec)
            if x is None:
                raise SDRError("no preimage under M_%d in internal degree %d" % (d, q))
            for r, c in x.items():
                l, w = sl.row_basis[r]
                terms = out.setdefault(l, {})
                s = terms.get(w, 0) + c
                if s:
                    terms[w] = s
                else:
                    terms.pop(w, None)
        return {l: self.alg.element(t) for l, t in out.items() if t}

    def solve_matrix(self, d, Y):
        return {i: r for i, r in ((i, self.solve_row(d, y)) for i, y in Y.items()) if r}

    # -- the maps ------------------------------------------------------
    def differential(self, f: Cochain) -> Cochain:
        n = f.n
        alg = self.alg
        sign = -1 if n % 2 else 1
        comps = {}
        for j in self.comp_range(n + 1):
            acc = {}
            Fj = f.comps.get(j)
            if Fj and j - n >= 1:
                acc = _matmul(alg, Fj, self.M(j - n))
            Fp = f.comps.get(j - 1)
            if Fp:
                acc = _madd(acc, _matmul(alg, self.M(j), Fp), -sign)
            if acc:
                comps[j] = acc
        return Cochain(n + 1, comps)

    def compose(self, f: Cochain, g: Cochain) -> Cochain:
        """``f g``: first ``g``, then ``f``."""
        n = f.n + g.n
        comps = {}
        for j in self.comp_range(n):
            Gj = g.comps.get(j)
            Fj = f.comps.get(j - g.n)
            if Gj and Fj:
                m = _matmul(self.alg, Gj, Fj)
                if m:
                    comps[j] = m
        return Cochain(n, comps)

    def project(self, f: Cochain) -> ExtClass:
        n = f.n
        coords = {}
        if 0 <= n <= self.J:
            for l, row in f.comps.get(n, {}).items():
                c = row.get(0)
                if c is not None:
                    s = c.terms.get(())
                    if s:
                        coords[l] = s
        return ExtClass(n, coords)

    def lift(self, n, l) -> Cochain:
        """``i`` of the dual basis element ``l`` of ``Q_n``."""
        key = (n, l)
        got = self._lifts.get(key)
        if got is not None:
            return got
        if not 0 <= n <= self.J or l >= self.rank[n]:
            raise WindowError("no class (%d, %d) in the window" % (n, l))
        one = Poly.scalar(1, self.alg.gens)
        comps = {n: {l: {0: one}}}
        sign = -1 if n % 2 else 1
        for j in range(n + 1, self.J + 1):
            rhs = _matmul(self.alg, self.M(j), comps.get(j - 1, {}))
            if not rhs:
                continue
            comps[j] = self.solve_matrix(j - n, _mscale(rhs, sign))
        f = Cochain(n, comps)
        with self._lock:
            self._lifts[key] = f
        return f

    def include(self, e: ExtClass) -> Cochain:
        out = Cochain(e.n)
        for l, c in e.items():
            out = out.axpy(c, self.lift(e.n, l))
        return out

    def lift_coboundary(self, b: Cochain) -> Cochain:
        """A deterministic ``f`` with ``d f = b``, zero below ``j = n``."""
        n = b.n
        sign = -1 if (n - 1) % 2 else 1
        comps = {}
        for j in self.comp_range(n - 1):
            if j < n:
                continue
            rhs = dict(b.comps.get(j, {}))
            Fp = comps.get(j - 1)
            if Fp:
                rhs = _madd(rhs, _matmul(self.alg, self.M(j), Fp), sign)
            if not rhs:
                continue
            if j - n + 1 < 1:
                raise SDRError("coboundary lift needs M_%d" % (j - n + 1))
            comps[j] = self.solve_matrix(j - n + 1, rhs)
        return Cochain(n - 1, comps)

    def G(self, x: Cochain) -> Cochain:
        if x.is_zero():
            return Cochain(x.n - 1)
        z = x - self.include(self.project(x)) - self.lift_coboundary(self.differential(x))
        return self.lift_coboundary(z)


# ---------------------------------------------------------------------------
# windowed bases and verification


def cochain_basis(sdr: SDR, n, w):
    """Index list ``(j, i, k, word)`` of a basis of windowed ``U^{n}`` of weight ``w``."""
    out = []
    alg = sdr.alg
    for j in sdr.comp_range(n):
        for i, a in enumerate(sdr.deg[j]):
            for k, b in enumerate(sdr.deg[j - n]):
                e = a - b - w
                if e >= 0:
                    out.extend((j, i, k, word) for word in alg.basis(e))
    return out


def basis_cochain(sdr, n, key):
    j, i, k, word = key
    return Cochain(n, {j: {i: {k: sdr.alg.element({word: 1})}}})


def cochain_vector(f: Cochain, index):
    vec = {}
    for j, m in f.comps.items():
        for i, row in m.items():
            for k, p in row.items():
                for word, c in p.terms.items():
                    vec[index[(j, i, k, word)]] = c
    return vec


@dataclass
class DegreeCheck:
    n: int
    w: int
    dim_U: int
    dim_Z: int
    dim_B: int
    dim_H: int
    dim_L: int
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


@dataclass
class SDRReport:
    J: int
    degrees: list
    pi_identity: bool

    @property
    def ok(self):
        return self.pi_identity and all(d.ok for d in self.degrees)


def _rank(vecs, field):
    ech = Echelon(field)
    for v in vecs:
        ech.add(v)
    return ech.rank


def check_degree(sdr: SDR, n, w) -> DegreeCheck:
    """Splittings, the homotopy identity and side conditions on ``U^{n}`` of weight ``w``."""
    F = sdr.alg.field
    bas = {m: cochain_basis(sdr, m, w) for m in (n - 1, n, n + 1)}
    idx = {m: {k: t for t, k in enumerate(b)} for m, b in bas.items()}
    cn = [basis_cochain(sdr, n, k) for k in bas[n]]
    dn = [cochain_vector(sdr.differential(x), idx[n + 1]) for x in cn]
    Z = left_kernel(dn, F)
    dim_Z = len(Z)
    Bvecs = [cochain_vector(sdr.differential(basis_cochain(sdr, n - 1, k)), idx[n])
             for k in bas[n - 1]]
    dim_B = _rank(Bvecs, F)
    H = [sdr.lift(n, l) for l in range(sdr.rank[n]) if sdr.deg[n][l] == w] if 0 <= n <= sdr.J else []
    Hvecs = [cochain_vector(h, idx[n]) for h in H]
    fails = []
    if _rank(Bvecs + Hvecs, F) != dim_B + len(H):
        fails.append("B + H is not direct")
    if dim_B + len(H) != dim_Z:
        fails.append("dim Z %d != dim B %d + dim H %d" % (dim_Z, dim_B, len(H)))
    # L = G(B^{n+1}); B^{n+1} spanned by the images d(x)
    Bn1 = [sdr.differential(x) for x in cn]
    Lvecs = [cochain_vector(sdr.G(b), idx[n]) for b in Bn1 if not b.is_zero()]
    dim_L = _rank(Lvecs, F)
    dim_B1 = _rank(dn, F)
    if dim_L != dim_B1:
        fails.append("dim L %d != dim B^{n+1} %d" % (dim_L, dim_B1))
    Zvecs = [{t: c for t, c in kv.items()} for kv in Z]
    if _rank(Lvecs + Zvecs, F) != len(cn):
        fails.append("L + Z != U")
    for x in cn:
        Gx = sdr.G(x)
        lhs = x - sdr.include(sdr.project(x))
        rhs = sdr.differential(Gx) + sdr.G(sdr.differential(x))
        if lhs != rhs:
            fails.append("homotopy identity fails")
            break
        if not sdr.G(Gx).is_zero():
            fails.append("G G != 0")
            break
        if not sdr.project(Gx).is_zero():
            fails.append("p G != 0")
            break
    for h in H:
        if not sdr.G(h).is_zero():
            fails.append("G i != 0")
            break
    return DegreeCheck(n, w, len(cn), dim_Z, dim_B, len(H), dim_L, fails)


def build_sdr(res, J, verify=True, degrees=None) -> tuple:
    """``(SDR, SDRReport)``; verification runs over ``1 <= n <= J - 1`` at the
    weights carried by ``Q_n`` unless ``degrees`` lists ``(n, w)`` pairs."""
    sdr = SDR(res, J)
    report = None
    if verify:
        pi = True
        for n in range(0, J + 1):
            for l in range(sdr.rank[n]):
                e = sdr.project(sdr.lift(n, l))
                if e.coords != {l: 1}:
                    pi = False
        if degrees is None:
            degrees = [(n, w) for n in range(1, J) for w in sorted(set(sdr.deg[n]))]
        checks = [check_degree(sdr, n, w) for n, w in degrees]
        report = SDRReport(J, checks, pi)
        if not report.ok:
            bad = [c for c in checks if not c.ok]
            raise SDRError("homotopy data failed verification: %s"
                           % "; ".join("n=%d w=%d: %s" % (c.n, c.w, ", ".join(c.failures)) for c in bad)
                           if bad else "p i != 1")
    return sdr, report


# ---------------------------------------------------------------------------
# the recursion


def _sign(e):
    return -1 if e % 2 else 1


class Merkulov:
    """Memoised ``G lambda_k`` and ``m_k`` on tensors of dual basis elements.

    A basis element is a pair ``(n, l)``: degree ``n``, row ``l`` of ``Q_n``.
    """

    def __init__(self, sdr: SDR, prune=True):
        self.sdr = sdr
        self.prune = prune
        self._gl = {}
        self._m = {}
        self._lock = threading.RLock()

    def weight(self, x):
        return self.sdr.deg[x[0]][x[1]]

    def _gl_of(self, xs):
        got = self._gl.get(xs)
        if got is not None:
            return got
        if len(xs) == 1:
            n, l = xs[0]
            val = -self.sdr.lift(n, l)
        else:
            lam = self.lam(xs)
            val = self.sdr.G(lam) if not lam.is_zero() else Cochain(lam.n - 1)
        with self._lock:
            self._gl[xs] = val
        return val

    def lam(self, xs) -> Cochain:
        xs = tuple(xs)
        s = len(xs)
        n = sum(x[0] for x in xs) + 2 - s
        if n > self.sdr.J:
            if self.sdr.exhaustive:
                return Cochain(n)
            raise WindowError("lambda_%d lands in degree %d beyond the window %d" % (s, n, self.sdr.J))
        w = sum(self.weight(x) for x in xs)
        out = Cochain(n)
        if self.prune and not self.sdr.weight_present(n, w):
            return out
        for a in range(1, s):
            b = s - a
            left, right = xs[:a], xs[a:]
            ga = self._gl_of(left)
            if ga.is_zero():
                continue
            gb = self._gl_of(right)
            if gb.is_zero():
                continue
            e = (a + 1) + (1 - b) * sum(x[0] for x in left)
            out = out.axpy(_sign(e), self.sdr.compose(ga, gb))
        return out

    def m(self, xs) -> ExtClass:
        """``m_k`` on a tuple of basis elements (``m_1 = 0``)."""
        xs = tuple(xs)
        k = len(xs)
        n = sum(x[0] for x in xs) + 2 - k
        if k < 2:
            return ExtClass(n, {})
        got = self._m.get(xs)
        if got is not None:
            return got
        w = sum(self.weight(x) for x in xs)
        if self.prune and self.sdr.ext_dim(n, w) == 0 and (n <= self.sdr.J or self.sdr.exhaustive):
            val = ExtClass(n, {})
        else:
            val = self.sdr.project(self.lam(xs))
        with self._lock:
            self._m[xs] = val
        return val

    def m_linear(self, args) -> ExtClass:
        """``m_k`` on a tensor of (homogeneous) :class:`ExtClass` values."""
        k = len(args)
        n = sum(a.n for a in args) + 2 - k
        acc = {}
        for combo in product(*[a.terms() for a in args]):
            xs = tuple(x for x, _ in combo)
            c = 1
            for _, a in combo:
                c = c * a
            for l, v in self.m(xs).coords.items():
                s = acc.get(l, 0) + c * v
                if s:
                    acc[l] = s
                else:
                    acc.pop(l, None)
        return ExtClass(n, acc)


def eval_m(merk: Merkulov, k, classes) -> ExtClass:
    if len(classes) != k:
        raise ValueError("m_%d needs %d arguments, got %d" % (k, k, len(classes)))
    return merk.m_linear(classes)


def basis_class(n, l):
    return ExtClass(n, {l: 1})


def stasheff_residual(merk: Merkulov, xs) -> ExtClass:
    """Left side of the Stasheff identity of arity ``len(xs)`` on basis elements."""
    xs = tuple(xs)
    N = len(xs)
    total = sum(x[0] for x in xs) + 3 - N
    acc = {}
    for s in range(2, N):
        for r in range(0, N - s + 1):
            t = N - r - s
            inner = merk.m(xs[r:r + s])
            if inner.is_zero():
                continue
            sign = _sign(r + s * t + (2 - s) * sum(x[0] for x in xs[:r]))
            args = [basis_class(*x) for x in xs[:r]] + [inner] + [basis_class(*x) for x in xs[r + s:]]
            out = merk.m_linear(args)
            for l, v in out.coords.items():
                q = acc.get(l, 0) + sign * v
                if q:
                    acc[l] = q
                else:
                    acc.pop(l, None)
    return ExtClass(total, acc)


@dataclass
class StasheffReport:
    checked: int
    residuals: list

    @property
    def ok(self):
        return not self.residuals


def ext_basis(sdr: SDR, pmin=1, pmax=None):
    pmax = sdr.J if pmax is None else min(pmax, sdr.J)
    return [(n, l) for n in range(pmin, pmax + 1) for l in range(sdr.rank[n])]


def stasheff_check(merk: Merkulov, n_max, max_total, tensors=None) -> StasheffReport:
    """SI(n) for ``3 <= n <= n_max`` on basis tensors of total degree ``<= max_total``.

    SI(1) and SI(2) hold trivially because ``m_1 = 0``.
    """
    sdr = merk.sdr
    basis = ext_basis(sdr, 1, max_total)
    checked = 0
    residuals = []
    if tensors is None:
        tensors = []
        for N in range(3, n_max + 1):
            tensors.extend(_tensors(basis, N, max_total))
    for xs in tensors:
        checked += 1
        r = stasheff_residual(merk, xs)
        if not r.is_zero():
            residuals.append((xs, r))
    return StasheffReport(checked, residuals)


def _tensors(basis, N, max_total):
    out = []

    def rec(prefix, total):
        if len(prefix) == N:
            out.append(tuple(prefix))
            return
        left = N - len(prefix) - 1
        for x in basis:
            if total + x[0] + left <= max_total:
                prefix.append(x)
                rec(prefix, total + x[0])
                prefix.pop()
    rec([], 0)
    return out


@dataclass
class MTable:
    """Nonzero values ``m_k(x_1, ..., x_k)`` on basis tensors."""

    entries: dict

    def nonzero(self):
        return {k: v for k, v in self.entries.items() if not v.is_zero()}


def m_table(merk: Merkulov, k_max, max_total, k_min=2) -> MTable:
    basis = ext_basis(merk.sdr, 1, max_total)
    entries = {}
    for k in range(k_min, k_max + 1):
        for xs in _tensors(basis, k, max_total):
            entries[xs] = merk.m(xs)
    return MTable(entries)
