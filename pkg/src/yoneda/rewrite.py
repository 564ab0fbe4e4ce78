"""Rewriting systems, normal forms and monomial bases of quotient algebras.

A homogeneous relation ``lead + rest`` (lead the deg-lex largest word, with
coefficient 1) is read as the rule ``lead -> -rest``.  The normal words, the
words containing no lead as a subword, form a basis of the quotient as soon
as all overlap ambiguities between leads resolve.  No completion is
attempted: an unresolved ambiguity is an error.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field

from .freealg import Poly, Presentation, word_key, word_str
from .linalg import Echelon


class NotConfluentError(ValueError):
    def __init__(self, ambiguities, gens):
        self.ambiguities = ambiguities
        shown = ", ".join(word_str(w, gens) for w, _, _ in ambiguities[:5])
        super().__init__("%d unresolved overlap ambiguit%s: %s"
                         % (len(ambiguities), "y" if len(ambiguities) == 1 else "ies", shown))


class CertificateError(ValueError):
    """A computation was requested beyond a certified degree bound."""


@dataclass(frozen=True)
class RewriteRule:
    lead: tuple
    rest: Poly

    def relation(self):
        return Poly.word(self.lead, self.rest.gens) + self.rest


@dataclass
class RewriteSystem:
    rules: list
    confluence_bound: int
    complete: bool
    checked_overlaps: int = 0
    unresolved: list = dc_field(default_factory=list)

    @property
    def leads(self):
        return [r.lead for r in self.rules]

    @property
    def max_lead(self):
        return max((len(r.lead) for r in self.rules), default=1)

    def certified(self, d):
        return self.complete or d <= self.confluence_bound


def _reduce_with(rules, poly):
    """Full normal form of ``poly`` against an explicit rule list (no memo)."""
    by_lead = {r.lead: r for r in rules}
    lens = sorted({len(l) for l in by_lead})
    terms = dict(poly.terms)
    while True:
        target = None
        for w in sorted(terms, key=word_key, reverse=True):
            occ = _leftmost(w, by_lead, lens)
            if occ is not None:
                target = (w, occ)
                break
        if target is None:
            return Poly._raw(terms, poly.gens)
        w, (i, lead) = target
        c = terms.pop(w)
        for v, a in by_lead[lead].rest.terms.items():
            nw = w[:i] + v + w[i + len(lead):]
            s = terms.get(nw, 0) - c * a
            if s:
                terms[nw] = s
            else:
                terms.pop(nw, None)


def _leftmost(w, leads, lens):
    n = len(w)
    for i in range(n):
        for l in lens:
            if i + l > n:
                break
            if w[i:i + l] in leads:
                return i, w[i:i + l]
    return None


def _rule_of(poly, field):
    lead = poly.leading_word()
    lc = poly.terms[lead]
    rest = {w: field.div(c, lc) for w, c in poly.terms.items() if w != lead}
    return RewriteRule(lead, Poly._raw(rest, poly.gens))


def _interreduce(polys, field):
    polys = [p for p in polys if p]
    changed = True
    while changed:
        changed = False
        for i in range(len(polys)):
            others = [_rule_of(q, field) for j, q in enumerate(polys) if j != i and q]
            r = _reduce_with(others, polys[i]) if others else polys[i]
            if r != polys[i]:
                polys[i] = r
                changed = True
        polys = [p for p in polys if p]
    rules = [_rule_of(p, field) for p in polys]
    rules.sort(key=lambda r: word_key(r.lead))
    return rules


def overlaps(leads):
    """All overlap ambiguities ``(word, lead1, lead2)``: a proper suffix of
    ``lead1`` equals a proper prefix of ``lead2``."""
    out = []
    for u in leads:
        for v in leads:
            for k in range(1, min(len(u), len(v))):
                if u[-k:] == v[:k]:
                    out.append((u + v[k:], u, v))
    out.sort(key=lambda t: (word_key(t[0]), word_key(t[1]), word_key(t[2])))
    return out


def build_rewrite_system(pres: Presentation, confluence_bound=12, strict=True):
    """Rules from the relations, with the overlap ambiguities checked.

    Every ambiguity of length at most ``confluence_bound`` is resolved or
    reported.  Since leads are finite, once the bound covers the longest
    overlap the system is confluent outright (``complete``).  With
    ``strict`` an unresolved ambiguity raises :class:`NotConfluentError`.
    """
    rules = _interreduce(list(pres.relations), pres.field)
    by_lead = {r.lead: r for r in rules}
    amb = overlaps(list(by_lead))
    unresolved = []
    checked = 0
    for w, u, v in amb:
        if len(w) > confluence_bound:
            continue
        checked += 1
        one = _rewrite_at(w, 0, by_lead[u])
        two = _rewrite_at(w, len(w) - len(v), by_lead[v])
        if _reduce_with(rules, one) != _reduce_with(rules, two):
            unresolved.append((w, u, v))
    complete = not unresolved and all(len(w) <= confluence_bound for w, _, _ in amb)
    system = RewriteSystem(rules, confluence_bound, complete, checked, unresolved)
    if unresolved and strict:
        raise NotConfluentError(unresolved, pres.gens)
    return system


def _rewrite_at(w, i, rule):
    gens = rule.rest.gens
    out = {}
    for v, a in rule.rest.terms.items():
        out[w[:i] + v + w[i + len(rule.lead):]] = -a
    return Poly(out, gens)


class Algebra:
    """The quotient ``T(V)/I`` presented by a confluent rewriting system.

    Elements are :class:`Poly` values in normal form.  Normal forms of words
    and the normal-word bases are memoised; the memo tables only ever gain
    entries, always with the same value.
    """

    def __init__(self, pres: Presentation, system: RewriteSystem):
        self.pres = pres
        self.system = system
        self.field = pres.field
        self.gens = pres.gens
        self.ngens = len(pres.gens)
        self._rules = {r.lead: r.rest.terms for r in system.rules}
        self._lens = sorted({len(l) for l in self._rules})
        self._nf = {}
        self._basis = {0: [()]}
        self._index = {}
        self._lock = threading.RLock()

    @classmethod
    def from_presentation(cls, pres, confluence_bound=12):
        return cls(pres, build_rewrite_system(pres, confluence_bound))

    def __repr__(self):
        return "Algebra(gens=%s, relations=%d)" % (",".join(self.gens), len(self.pres.relations))

    @property
    def max_lead(self):
        return self.system.max_lead

    def check_degree(self, d):
        if not self.system.certified(d):
            raise CertificateError("degree %d exceeds the confluence certificate %d"
                                   % (d, self.system.confluence_bound))

    # -- words ---------------------------------------------------------
    def is_normal(self, w):
        return _leftmost(w, self._rules, self._lens) is None

    def nf_word(self, w):
        """Normal form of a single word as a dict ``word -> coeff``."""
        got = self._nf.get(w)
        if got is not None:
            return got
        occ = _leftmost(w, self._rules, self._lens)
        if occ is None:
            out = {w: 1}
        else:
            i, lead = occ
            out = {}
            pre, post = w[:i], w[i + len(lead):]
            for v, a in self._rules[lead].items():
                for x, b in self.nf_word(pre + v + post).items():
                    s = out.get(x, 0) - a * b
                    if s:
                        out[x] = s
                    else:
                        out.pop(x, None)
        self._nf[w] = out
        return out

    def element(self, terms):
        return Poly._raw({w: c for w, c in terms.items() if c}, self.gens)

    def word(self, w, c=1):
        return self.normal_form(Poly.word(w, self.gens, c))

    def gen(self, i):
        return Poly.word((i,), self.gens)

    def normal_form(self, p: Poly) -> Poly:
        out = {}
        for w, c in p.terms.items():
            for x, b in self.nf_word(w).items():
                s = out.get(x, 0) + c * b
                if s:
                    out[x] = s
                else:
                    out.pop(x, None)
        return Poly._raw(out, self.gens)

    def mul(self, p: Poly, q: Poly) -> Poly:
        """Product of two normal-form elements, in normal form."""
        out = {}
        nf = self.nf_word
        for u, a in p.terms.items():
            for v, b in q.terms.items():
                ab = a * b
                for x, c in nf(u + v).items():
                    s = out.get(x, 0) + ab * c
                    if s:
                        out[x] = s
                    else:
                        out.pop(x, None)
        return Poly._raw(out, self.gens)

    # -- bases -----------------------------------------------------------
    def basis(self, d):
        """Normal words of length ``d`` in deg-lex order."""
        got = self._basis.get(d)
        if got is not None:
            return got
        self.check_degree(d)
        with self._lock:
            prev = self.basis(d - 1) if d - 1 not in self._basis else self._basis[d - 1]
            out = []
            L = self.max_lead
            for w in prev:
                for g in range(self.ngens):
                    v = w + (g,)
                    tail = v[-L:]
                    if any(tail[len(tail) - l:] in self._rules for l in self._lens if l <= len(tail)):
                        continue
                    out.append(v)
            self._basis[d] = out
        return out

    def basis_index(self, d):
        got = self._index.get(d)
        if got is None:
            got = {w: i for i, w in enumerate(self.basis(d))}
            self._index[d] = got
        return got

    def dim(self, d):
        if d < 0:
            return 0
        if d in self._basis:
            return len(self._basis[d])
        return self.hilbert(d)[d]

    def hilbert(self, N):
        """``[dim B_0, ..., dim B_N]`` by counting normal words.

        The count runs over suffix states (last ``L-1`` letters, ``L`` the
        longest lead), so large degrees never enumerate words.
        """
        self.check_degree(N)
        L = self.max_lead
        k = max(L - 1, 0)
        dims = [1]
        states = {(): 1}
        for m in range(1, N + 1):
            nxt = {}
            for s, cnt in states.items():
                for g in range(self.ngens):
                    v = s + (g,)
                    if any(v[len(v) - l:] in self._rules for l in self._lens if l <= len(v)):
                        continue
                    key = v[-k:] if k else ()
                    nxt[key] = nxt.get(key, 0) + cnt
            states = nxt
            dims.append(sum(states.values()))
        return dims

    # -- coordinates -------------------------------------------------------
    def coords(self, p: Poly):
        """Coordinates of a homogeneous normal-form element in the word basis."""
        if not p:
            return {}
        idx = self.basis_index(p.degree())
        return {idx[w]: c for w, c in p.terms.items()}

    def str(self, p):
        return p.to_str(self.field.to_str)


def normal_form(alg: Algebra, p: Poly) -> Poly:
    return alg.normal_form(p)


def enumerate_basis(alg: Algebra, d):
    return list(alg.basis(d))


def hilbert(alg: Algebra, N):
    return alg.hilbert(N)


def ideal_span(pres: Presentation, m, relations=None):
    """Echelon form of ``I_m`` spanned by all ``u r v`` (brute force).

    Words are indexed by their base-``g`` value, so columns follow the
    deg-lex order in degree ``m``.  Used as an independent check on the
    rewriting basis; feasible only for small ``g ** m``.
    """
    g = len(pres.gens)
    rels = pres.relations if relations is None else relations
    ech = Echelon(pres.field)
    from itertools import product
    for r in rels:
        dr = r.degree()
        if dr > m:
            continue
        for a in range(m - dr + 1):
            for u in product(range(g), repeat=a):
                for v in product(range(g), repeat=m - dr - a):
                    vec = {}
                    for w, c in r.terms.items():
                        vec[_word_code(u + w + v, g)] = c
                    ech.add(vec)
    return ech


def _word_code(w, g):
    x = 0
    for i in w:
        x = x * g + i
    return x
