"""Exact scalar fields: the rationals and prime fields F_p."""

from fractions import Fraction


class Mod:
    """Element of a prime field. Immutable."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError("mixing elements of F_%d and F_%d" % (self.p, other.p))
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash(self.v)

    def __repr__(self):
        return str(self.v)

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return Mod(pow(self.v, -1, self.p), self.p)


class Rationals:
    name = "Q"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, str):
            return self(Fraction(x))
        raise TypeError("cannot coerce %r into Q" % (x,))

    def div(self, a, b):
        if b == 1:
            return a
        if b == -1:
            return -a
        q = Fraction(a) / b
        return q.numerator if q.denominator == 1 else q

    def inv(self, a):
        return self.div(1, a)

    def to_str(self, a):
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return "%d/%d" % (a.numerator, a.denominator)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    def __init__(self, p):
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise ValueError("F_%d: %d is not prime" % (p, p))
        self.p = p
        self.characteristic = p
        self.name = "F%d" % p

    def __call__(self, x):
        if isinstance(x, Mod):
            if x.p != self.p:
                raise ValueError("element of F_%d is not in %s" % (x.p, self.name))
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError("%s has no image in %s" % (x, self.name))
            return Mod(x.numerator * pow(x.denominator, -1, self.p), self.p)
        if isinstance(x, int):
            return Mod(x, self.p)
        raise TypeError("cannot coerce %r into %s" % (x, self.name))

    def div(self, a, b):
        return self(a) * self(b).inverse()

    def inv(self, a):
        return self(a).inverse()

    def to_str(self, a):
        return str(self(a).v)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return self.name


QQ = Rationals()


def field_from_name(name):
    """Parse ``Q`` or ``F<p>`` (e.g. ``F7``)."""
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError("unsupported field %r (use Q or F<p>)" % name)
