"""Words, noncommutative polynomials and presentations of graded algebras.

Generators all live in degree 1 and are identified with their position in
the declared generator list; a word is a tuple of such positions.  The
declaration order is the letter order of the degree-lexicographic monomial
order used everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import QQ


class PresentationError(ValueError):
    pass


def word_key(w):
    """Sort key realising the deg-lex order."""
    return (len(w), w)


def compare_words(u, v):
    """Return -1, 0 or 1 as ``u`` is smaller than, equal to or greater than ``v``."""
    ku, kv = word_key(u), word_key(v)
    return (ku > kv) - (ku < kv)


def word_str(w, gens):
    if not w:
        return "1"
    return "*".join(gens[i] for i in w)


class Poly:
    """Element of the free algebra: a sparse map word -> nonzero scalar.

    Treat instances as immutable.  ``gens`` is the tuple of generator names
    the words refer to.
    """

    __slots__ = ("terms", "gens")

    def __init__(self, terms=None, gens=()):
        self.terms = {w: c for w, c in (terms or {}).items() if c}
        self.gens = tuple(gens)

    @classmethod
    def _raw(cls, terms, gens):
        p = object.__new__(cls)
        p.terms = terms
        p.gens = gens
        return p

    @classmethod
    def word(cls, w, gens, coeff=1):
        return cls._raw({tuple(w): coeff} if coeff else {}, tuple(gens))

    @classmethod
    def scalar(cls, c, gens):
        return cls.word((), gens, c)

    @classmethod
    def zero(cls, gens):
        return cls._raw({}, tuple(gens))

    def _check(self, other):
        if other.gens is not self.gens and other.gens != self.gens:
            raise PresentationError(
                "polynomials over different generator sets: %r vs %r" % (self.gens, other.gens))

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.scalar(other, self.gens)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return Poly._raw(out, self.gens)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({w: -c for w, c in self.terms.items()}, self.gens)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.scalar(other, self.gens)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return Poly._raw({}, self.gens)
        return Poly._raw({w: c * a for w, a in self.terms.items()}, self.gens)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                s = out.get(w, 0) + a * b
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return Poly._raw(out, self.gens)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms and (not self.terms or self.gens == other.gens)
        if not other:
            return not self.terms
        return self.terms == {(): other}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def items(self):
        """Terms in decreasing deg-lex order."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def words(self):
        return [w for w, _ in self.items()]

    def coeff(self, w):
        return self.terms.get(tuple(w), 0)

    def degrees(self):
        return {len(w) for w in self.terms}

    def degree(self):
        """Degree of a homogeneous nonzero polynomial."""
        ds = self.degrees()
        if len(ds) != 1:
            raise PresentationError("degree of an inhomogeneous or zero polynomial")
        return ds.pop()

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def leading_word(self):
        return max(self.terms, key=word_key)

    def leading_coeff(self):
        return self.terms[self.leading_word()]

    def to_str(self, fmt=str):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.items():
            c_s = fmt(c)
            neg = c_s.startswith("-")
            if neg:
                c_s = c_s[1:]
            if not w:
                body = c_s
            elif c_s == "1":
                body = word_str(w, self.gens)
            else:
                body = c_s + "*" + word_str(w, self.gens)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return self.to_str()


def poly_arith(op, *args):
    """Dispatch ``add``, ``scale`` or ``multiply`` on polynomials."""
    if op == "add":
        out = args[0]
        for a in args[1:]:
            out = out + a
        return out
    if op == "scale":
        p, c = args
        return p.scale(c)
    if op == "multiply":
        out = args[0]
        for a in args[1:]:
            out = out * a
        return out
    raise ValueError("unknown operation %r" % op)


@dataclass(frozen=True)
class Presentation:
    gens: tuple
    relations: tuple
    field: object = QQ

    @property
    def ngens(self):
        return len(self.gens)

    def var(self, name):
        return Poly.word((self.gens.index(name),), self.gens)

    def to_text(self):
        lines = ["field %s" % self.field.name, "gen " + " ".join(self.gens)]
        for r in self.relations:
            lines.append("rel " + r.to_str(self.field.to_str))
        return "\n".join(lines) + "\n"


def make_presentation(gens, relations, field=QQ):
    """Validate generators and relations; relations get leading coefficient 1."""
    gens = tuple(gens)
    if len(set(gens)) != len(gens):
        raise PresentationError("duplicate generator names")
    if not gens:
        raise PresentationError("at least one generator is required")
    rels = []
    for r in relations:
        if not isinstance(r, Poly):
            raise PresentationError("relation %r is not a polynomial" % (r,))
        if r.gens != gens:
            raise PresentationError("relation %r uses unknown generators" % (r,))
        for w in r.terms:
            if any(not 0 <= i < len(gens) for i in w):
                raise PresentationError("relation %r uses unknown generators" % (r,))
        if r.is_zero():
            continue
        if not r.is_homogeneous():
            raise PresentationError("relation %s is inhomogeneous (degrees %s)"
                                    % (r, sorted(r.degrees())))
        if r.degree() < 2:
            raise PresentationError("relation %s has degree < 2" % r)
        terms = {w: field(c) for w, c in r.terms.items()}
        r = Poly(terms, gens)
        if r.is_zero():
            continue
        lc = r.leading_coeff()
        rels.append(Poly._raw({w: field.div(c, lc) for w, c in r.terms.items()}, gens))
    return Presentation(gens, tuple(rels), field)
