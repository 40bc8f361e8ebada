"""Graded polynomial base rings, monomial orders and sparse polynomials.

A raw polynomial is a dict ``{exponent_tuple: coefficient}`` with no zero
coefficients.  :class:`Poly` wraps one together with its ring; the heavy
machinery (Groebner bases, complexes) works on the raw dicts directly.
"""

import re
from fractions import Fraction

from .field import Field, QQ
from . import gbcore


class MonomialOrder:
    """Degree-compatible monomial order.

    ``grevlex`` is weighted graded reverse lexicographic.  ``lex`` is plain
    lexicographic refined by weighted degree, which agrees with lex on every
    homogeneous polynomial (the only kind the public operations accept).
    """

    NAMES = ("grevlex", "lex")

    def __init__(self, name="grevlex", weights=None):
        if name not in self.NAMES:
            raise ValueError(f"unknown monomial order {name!r}")
        self.name = name
        self.weights = tuple(weights) if weights is not None else None

    def degree(self, e):
        w = self.weights
        if w is None:
            return sum(e)
        return sum(a * b for a, b in zip(e, w))

    def key(self, e):
        if self.name == "grevlex":
            return (self.degree(e), tuple(-a for a in reversed(e)))
        return (self.degree(e), tuple(e))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.name, self.weights) == (other.name, other.weights)

    def __hash__(self):
        return hash((self.name, self.weights))

    def __repr__(self):
        return f"MonomialOrder({self.name!r})"


# ---------------------------------------------------------------- raw ops

def p_add(f, g, p, c=1):
    """f + c*g on raw dicts (new dict)."""
    out = dict(f)
    for e, v in g.items():
        w = out.get(e, 0) + c * v
        if p:
            w %= p
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def p_scale(f, c, p):
    if not c:
        return {}
    if p:
        return {e: (v * c) % p for e, v in f.items() if (v * c) % p}
    return {e: v * c for e, v in f.items()}


def p_mul(f, g, p):
    out = {}
    for e1, v1 in f.items():
        for e2, v2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            w = out.get(e, 0) + v1 * v2
            if p:
                w %= p
            if w:
                out[e] = w
            else:
                out.pop(e, None)
    return out


def p_shift(f, m, c, p):
    """c * x^m * f."""
    out = {}
    for e, v in f.items():
        w = v * c
        if p:
            w %= p
        if w:
            out[tuple(a + b for a, b in zip(e, m))] = w
    return out


class BaseRing:
    """Graded ring ``k[x_1..x_n]`` or an Artinian quotient of it.

    ``weights`` are the positive internal degrees of the variables.  A
    defining ideal must consist of homogeneous polynomials whose quotient is
    finite dimensional; this is checked from the leading-term ideal.
    """

    def __init__(self, field=QQ, names=("x", "y"), weights=None, ideal=None, order="grevlex"):
        if not isinstance(field, Field):
            field = Field(field)
        self.field = field
        self.p = field.p
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for nm in self.names:
            if not re.fullmatch(r"[A-Za-z][A-Za-z_]*", nm):
                raise ValueError(f"bad variable name {nm!r}")
        self.nvars = len(self.names)
        if weights is None:
            weights = (1,) * self.nvars
        self.weights = tuple(int(w) for w in weights)
        if len(self.weights) != self.nvars or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive integers, one per variable")
        self.order = order if isinstance(order, MonomialOrder) else MonomialOrder(order, self.weights)
        if self.order.weights is None or self.order.weights != self.weights:
            self.order = MonomialOrder(self.order.name, self.weights)
        self.zero_exp = (0,) * self.nvars
        self._ideal_src = []
        self.ideal_gb = []
        if ideal:
            gens = [self._raw(g, ambient=True) for g in ideal]
            for i, g in enumerate(gens):
                if not g:
                    continue
                if self.raw_degree(g) is None:
                    raise ValueError(f"defining ideal generator {i} is not homogeneous")
                self._ideal_src.append(g)
            elems = gbcore.buchberger(
                [{(0, e): v for e, v in g.items()} for g in self._ideal_src],
                lambda t: self.order.key(t[1]), self.p, lambda t: self.wdeg(t[1]), True)
            self.ideal_gb = elems
            if any(max(x.lt[1]) == 0 for x in elems):
                raise ValueError("defining ideal is the unit ideal")
            for i in range(self.nvars):
                if not any(x.lt[1][i] > 0 and sum(x.lt[1]) == x.lt[1][i] for x in elems):
                    raise ValueError("defining ideal does not give a finite-dimensional quotient")
        self._reducer = gbcore.Reducer(self.ideal_gb, self.p, None)
        self._key = gbcore.TermKey(lambda t: self.order.key(t[1]))

    # -- basic data
    @property
    def is_artinian(self):
        return bool(self.ideal_gb)

    @property
    def ideal(self):
        """Generators of the defining ideal as raw dicts (reduced basis)."""
        return [{e: v for (_c, e), v in g.terms.items()} for g in self.ideal_gb]

    def ambient(self):
        """The polynomial ring this ring is a quotient of."""
        if not self.is_artinian:
            return self
        return BaseRing(self.field, self.names, self.weights, None, self.order.name)

    def wdeg(self, e):
        return sum(a * b for a, b in zip(e, self.weights))

    def raw_degree(self, f):
        """Weighted degree of a homogeneous raw polynomial, None otherwise.
        The zero polynomial has degree None as well."""
        d = None
        for e in f:
            de = self.wdeg(e)
            if d is None:
                d = de
            elif d != de:
                return None
        return d

    def reduce(self, f):
        """Normal form of a raw polynomial modulo the defining ideal."""
        if not self.ideal_gb or not f:
            return f
        v = self._reducer.reduce({(0, e): c for e, c in f.items()}, self._key)
        return {e: c for (_c, e), c in v.items()}

    def mul(self, f, g):
        return self.reduce(p_mul(f, g, self.p))

    def coerce_coeff(self, c):
        return self.field(c)

    # -- Poly construction
    def _raw(self, obj, ambient=False):
        if isinstance(obj, Poly):
            if obj.ring is not self and obj.ring.names != self.names:
                raise ValueError("polynomial from a different ring")
            f = dict(obj.terms)
        elif isinstance(obj, dict):
            f = {}
            for e, v in obj.items():
                e = tuple(e)
                if len(e) != self.nvars:
                    raise ValueError("exponent length does not match variable count")
                v = self.field(v)
                if v:
                    f[e] = v
        elif isinstance(obj, str):
            f = parse_poly(obj, self)
        elif isinstance(obj, (int, Fraction)):
            v = self.field(obj)
            f = {self.zero_exp: v} if v else {}
        else:
            raise TypeError(f"cannot make a polynomial from {type(obj).__name__}")
        return f if ambient else self.reduce(f)

    def __call__(self, obj):
        return Poly(self, self._raw(obj))

    def gens(self):
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(Poly(self, {tuple(e): self.field.one}))
        return out

    def one(self):
        return Poly(self, {self.zero_exp: self.field.one})

    def zero(self):
        return Poly(self, {})

    # -- text
    def format(self, f):
        """Canonical text of a raw polynomial: terms in decreasing order."""
        if not f:
            return "0"
        fld = self.field
        items = sorted(f.items(), key=lambda kv: self.order.key(kv[0]), reverse=True)
        parts = []
        for e, v in items:
            mono = "*".join(
                (nm if a == 1 else f"{nm}^{a}") for nm, a in zip(self.names, e) if a)
            neg = (v > (self.p - 1) // 2) if self.p else (v < 0)
            mag = ((self.p - v) if neg else v) if self.p else (-v if neg else v)
            cs = fld.format(mag) if not self.p else str(mag)
            if mono:
                body = mono if mag == 1 else f"{cs}*{mono}"
            else:
                body = cs
            if not parts:
                parts.append(("-" + body) if neg else body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def text(self):
        """Session-style declaration body, e.g. ``poly(x:1, y:1) / (x^3)``."""
        vs = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        s = f"poly({vs})"
        if self._ideal_src:
            s += " / (" + ", ".join(self.format(g) for g in self._ideal_src) + ")"
        return s

    def signature(self):
        return (self.p, self.names, self.weights, self.order.name,
                tuple(self.format(g) for g in self._ideal_src))

    def __eq__(self, other):
        return isinstance(other, BaseRing) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"BaseRing({self.field!r}, {self.text()})"


class Poly:
    """Immutable sparse polynomial in a :class:`BaseRing`."""

    __slots__ = ("ring", "terms", "_deg")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._deg = False

    def _other(self, g):
        if isinstance(g, Poly):
            return g.terms
        return self.ring._raw(g)

    def __add__(self, g):
        return Poly(self.ring, p_add(self.terms, self._other(g), self.ring.p))

    __radd__ = __add__

    def __sub__(self, g):
        return Poly(self.ring, p_add(self.terms, self._other(g), self.ring.p, -1))

    def __rsub__(self, g):
        return Poly(self.ring, p_add(self._other(g), self.terms, self.ring.p, -1))

    def __neg__(self):
        return Poly(self.ring, p_scale(self.terms, -1, self.ring.p))

    def __mul__(self, g):
        return Poly(self.ring, self.ring.mul(self.terms, self._other(g)))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, g):
        if isinstance(g, (int, Fraction, str)):
            g = self.ring(g)
        if not isinstance(g, Poly):
            return NotImplemented
        return self.terms == g.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        """Weighted degree when homogeneous and nonzero, else None."""
        if self._deg is False:
            self._deg = self.ring.raw_degree(self.terms)
        return self._deg

    def is_homogeneous(self):
        return not self.terms or self.degree is not None

    def leading_exponent(self):
        return max(self.terms, key=self.ring.order.key)

    def leading_coefficient(self):
        return self.terms[self.leading_exponent()]

    def constant_term(self):
        return self.terms.get(self.ring.zero_exp, self.ring.field.zero)

    def __str__(self):
        return self.ring.format(self.terms)

    def __repr__(self):
        return f"Poly({self})"


# ---------------------------------------------------------------- parsing

class PolyParseError(ValueError):
    def __init__(self, msg, col):
        super().__init__(f"{msg} at column {col}")
        self.msg = msg
        self.col = col


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z_]*)|(\S))")


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(0).strip() == "":
            break
        col = m.start(m.lastindex) + 1
        if m.group(1):
            toks.append(("num", int(m.group(1)), col))
        elif m.group(2):
            toks.append(("name", m.group(2), col))
        else:
            toks.append(("op", m.group(3), col))
        pos = m.end()
    toks.append(("end", None, len(text) + 1))
    return toks


def parse_poly(text, ring, names=None):
    """Parse ``text`` into a raw polynomial of ``ring`` (not reduced).

    Grammar: sums of products of factors; a factor is an integer, a
    variable, or a parenthesised expression, optionally raised with ``^``.
    Division is allowed only by a nonzero integer constant.  Errors raise
    :class:`PolyParseError` carrying a 1-based column.
    """
    names = names or ring.names
    index = {n: i for i, n in enumerate(names)}
    toks = _tokenize(text)
    p = ring.p
    fld = ring.field
    nv = len(names)
    zero = (0,) * nv
    pos = [0]

    def peek():
        return toks[pos[0]]

    def take():
        t = toks[pos[0]]
        pos[0] += 1
        return t

    def expr():
        sign = 1
        t = peek()
        if t[0] == "op" and t[1] in "+-":
            take()
            sign = -1 if t[1] == "-" else 1
        acc = p_scale(term(), sign, p)
        while True:
            t = peek()
            if t[0] == "op" and t[1] in "+-":
                take()
                rhs = term()
                acc = p_add(acc, rhs, p, -1 if t[1] == "-" else 1)
            else:
                return acc

    def term():
        acc = power()
        while True:
            t = peek()
            if t[0] == "op" and t[1] == "*":
                take()
                acc = p_mul(acc, power(), p)
            elif t[0] == "op" and t[1] == "/":
                take()
                d = peek()
                if d[0] != "num":
                    raise PolyParseError("division only by an integer constant", d[2])
                take()
                if fld(d[1]) == 0:
                    raise PolyParseError("division by zero", d[2])
                acc = p_scale(acc, fld.inv(fld(d[1])), p)
            elif t[0] in ("num", "name") or (t[0] == "op" and t[1] == "("):
                raise PolyParseError("missing operator", t[2])
            else:
                return acc

    def power():
        base = atom()
        t = peek()
        if t[0] == "op" and t[1] == "^":
            take()
            n = peek()
            if n[0] != "num":
                raise PolyParseError("exponent must be a nonnegative integer", n[2])
            take()
            out = {zero: fld.one}
            for _ in range(n[1]):
                out = p_mul(out, base, p)
            return out
        return base

    def atom():
        t = take()
        if t[0] == "num":
            v = fld(t[1])
            return {zero: v} if v else {}
        if t[0] == "name":
            if t[1] not in index:
                raise PolyParseError(f"unknown variable {t[1]!r}", t[2])
            e = [0] * nv
            e[index[t[1]]] = 1
            return {tuple(e): fld.one}
        if t[0] == "op" and t[1] == "(":
            v = expr()
            c = take()
            if not (c[0] == "op" and c[1] == ")"):
                raise PolyParseError("expected ')'", c[2])
            return v
        if t[0] == "end":
            raise PolyParseError("unexpected end of polynomial", t[2])
        raise PolyParseError(f"unexpected {t[1]!r}", t[2])

    out = expr()
    t = peek()
    if t[0] != "end":
        raise PolyParseError(f"unexpected {t[1]!r}", t[2])
    return out


def polynomial_ring(names="x,y", field=QQ, weights=None, order="grevlex"):
    """Convenience constructor: ``polynomial_ring("x,y")``."""
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    return BaseRing(field, names, weights, None, order)
