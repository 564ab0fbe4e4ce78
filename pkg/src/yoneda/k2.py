"""The matrix criterion for K2 algebras.

For a minimal resolution with matrices ``M_d`` lifted to the tensor algebra,
the algebra is K2 (as far as the resolution reaches) when for every ``d > 2``
the rows of ``[L_d : E_d]`` are linearly independent.  ``L_d`` holds the
linear coefficients of ``M_d``; ``E_d`` holds the classes of the entries of
``M_d M_{d-1}`` (multiplied in the tensor algebra) in ``I / I'`` with
``I' = V I + I V``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

from .freealg import Poly
from .linalg import Echelon, left_kernel
from .rewrite import Algebra, _word_code


def canonical_lift(M):
    """Entries of a module map re-read in the tensor algebra.

    Normal-form entries are already combinations of normal words, so this is
    the identity on representatives; the result is a plain list of rows.
    """
    return [list(r) for r in M.matrix]


class EssentialSpace:
    """``I_m / I'_m`` for each degree ``m`` up to a bound, built lazily.

    ``I'_m`` is spanned by the words ``u r v`` with ``r`` a relation and
    ``u v`` nonempty; since ``I_m = I'_m + span(relations of degree m)``, a
    basis of the quotient is a maximal set of relations independent modulo
    ``I'_m``.
    """

    def __init__(self, alg: Algebra, N):
        self.alg = alg
        self.N = N
        self.g = alg.ngens
        self._prime = {}
        self._quot = {}

    def _vec(self, p, m):
        return {_word_code(w, self.g): c for w, c in p.terms.items() if len(w) == m}

    def prime(self, m):
        """Echelon form of ``I'_m``."""
        ech = self._prime.get(m)
        if ech is not None:
            return ech
        self.alg.check_degree(m)
        ech = Echelon(self.alg.field)
        g = self.g
        for r in self.alg.pres.relations:
            k = r.degree()
            if k >= m:
                continue
            for a in range(m - k + 1):
                for u in product(range(g), repeat=a):
                    for v in product(range(g), repeat=m - k - a):
                        ech.add({_word_code(u + w + v, g): c for w, c in r.terms.items()})
        self._prime[m] = ech
        return ech

    def quotient(self, m):
        """``(echelon of residues of relations, labels)`` in degree ``m``."""
        got = self._quot.get(m)
        if got is not None:
            return got
        prime = self.prime(m)
        ech = Echelon(self.alg.field, track=True)
        labels = []
        for r in self.alg.pres.relations:
            if r.degree() != m:
                continue
            res, _ = prime.reduce(self._vec(r, m))
            if res and ech.add(res, label=len(labels)) is not None:
                labels.append(r)
        self._quot[m] = (ech, labels)
        return ech, labels

    def dim(self, m):
        return len(self.quotient(m)[1])

    def representatives(self, m):
        return list(self.quotient(m)[1])

    def coordinates(self, p: Poly):
        """Coordinates of a homogeneous ``p`` in ``I`` w.r.t. :meth:`representatives`."""
        if not p:
            return {}
        m = p.degree()
        res, _ = self.prime(m).reduce(self._vec(p, m))
        if not res:
            return {}
        ech, _ = self.quotient(m)
        x = ech.solve(res)
        if x is None:
            raise ValueError("element of degree %d is not in the ideal" % m)
        return x

    def is_essential(self, p: Poly):
        return bool(self.coordinates(p))


def essential_basis(alg: Algebra, N) -> EssentialSpace:
    return EssentialSpace(alg, N)


@dataclass
class K2Degree:
    d: int
    L: list
    E: list
    rows: int
    rank: int
    dependent_rows: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return self.rank == self.rows


@dataclass
class K2Report:
    D: int
    degrees: list
    certified: bool
    note: str = ""

    @property
    def verdict(self):
        return all(x.ok for x in self.degrees)

    def witness(self):
        for x in self.degrees:
            if not x.ok:
                return x
        return None


def _tensor_product(A, B, zero):
    out = []
    for row in A:
        new = []
        for k in range(len(B[0]) if B else 0):
            acc = zero
            for j, a in enumerate(row):
                b = B[j][k]
                if a and b:
                    acc = acc + a * b
            new.append(acc)
        out.append(new)
    return out


def k2_check(alg: Algebra, res, D) -> K2Report:
    """Row-independence test on ``[L_d : E_d]`` for ``3 <= d <= D``."""
    ess = EssentialSpace(alg, res.N)
    g = alg.ngens
    zero = Poly.zero(alg.gens)
    degrees = []
    top = min(D, res.complex.length)
    if D > res.complex.length and not res.ended:
        raise ValueError("resolution only reaches homological degree %d" % res.complex.length)
    for d in range(3, top + 1):
        Md = canonical_lift(res.M(d))
        Mp = canonical_lift(res.M(d - 1))
        prod = _tensor_product(Md, Mp, zero)
        L, E, rows = [], [], []
        col_of = {}
        for i, row in enumerate(Md):
            lin = {}
            for j, p in enumerate(row):
                for w, c in p.terms.items():
                    if len(w) == 1:
                        lin[j * g + w[0]] = c
            ess_row = {}
            for k, e in enumerate(prod[i]):
                if alg.normal_form(e):
                    raise ValueError("M_%d M_%d entry (%d,%d) is not in the ideal" % (d, d - 1, i, k))
                for t, c in ess.coordinates(e).items():
                    key = (k, e.degree(), t)
                    if key not in col_of:
                        col_of[key] = len(col_of)
                    ess_row[col_of[key]] = c
            L.append(lin)
            E.append(ess_row)
        off = len(Md[0]) * g if Md else 0
        for lin, er in zip(L, E):
            r = dict(lin)
            for kk, c in er.items():
                r[off + kk] = c
            rows.append(r)
        kern = left_kernel(rows, alg.field)
        dep = sorted({min(kv) for kv in kern})
        degrees.append(K2Degree(d, L, E, len(rows), len(rows) - len(kern), dep))
    certified = all(res.stage_certified[:max(0, top - 1)])
    if top < D:
        certified = certified and res.finished
    note = "checked 3 <= d <= %d" % top
    if top < D:
        note += "; resolution ends at %d" % top
    return K2Report(D, degrees, certified, note)
