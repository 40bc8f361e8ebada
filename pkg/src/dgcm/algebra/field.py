"""Exact coefficient fields: the rationals and prime fields GF(p).

Elements are plain Python values (``Fraction`` for QQ, ``int`` in ``[0, p)``
for GF(p)) so the hot loops in the Groebner engine can work on them without
wrapper objects.  Code that mixes the two only needs ``field.p``: after every
ring operation do ``v %= p`` when ``p`` is nonzero.
"""

from fractions import Fraction


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Field:
    """QQ when ``p == 0``, otherwise GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p=0):
        p = int(p)
        if p != 0 and not _is_prime(p):
            raise ValueError(f"characteristic must be 0 or prime, got {p}")
        self.p = p

    @property
    def characteristic(self):
        return self.p

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, x):
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            if isinstance(x, str):
                x = Fraction(x)
                return self(x)
            return int(x) % self.p
        return Fraction(x)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return 1 / a

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def format(self, a):
        if self.p:
            return str(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"

    def text(self):
        """Session-DSL spelling: ``Q`` or ``Fp 5``."""
        return f"Fp {self.p}" if self.p else "Q"


QQ = Field(0)


def GF(p):
    return Field(p)
