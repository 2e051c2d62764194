"""Exact base fields: arbitrary-precision rationals and prime fields.

Field elements are plain Python values (Fraction for Q, int in [0, p) for F_p);
the Field object owns the arithmetic.  No rounding ever happens.
"""
from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    pass


class Field:
    """Common interface; instances are stateless and hashable."""

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def of(self, x):
        """Coerce an int, Fraction, or numeric string into the field."""
        raise NotImplementedError

    def to_str(self, a) -> str:
        raise NotImplementedError

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def sum(self, items):
        acc = self.zero
        for x in items:
            acc = self.add(acc, x)
        return acc


class Rationals(Field):
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero")
        return 1 / Fraction(a)

    def of(self, x):
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise FieldError("division by zero")
        return pow(a, self.p - 2, self.p)

    def of(self, x):
        if isinstance(x, str):
            x = x.strip()
            if "/" in x:
                num, den = x.split("/")
                return self.mul(int(num) % self.p, self.inv(int(den)))
            x = int(x)
        if isinstance(x, Fraction):
            return self.mul(x.numerator % self.p, self.inv(x.denominator))
        return x % self.p

    def to_str(self, a):
        return str(a % self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = Rationals()


def parse_field(spec: str) -> Field:
    """Parse a field spec: 'q' for rationals, 'fp:<prime>' for a prime field."""
    s = spec.strip().lower()
    if s in ("q", "qq", "rational", "rationals"):
        return QQ
    if s.startswith("fp:"):
        return PrimeField(int(s[3:]))
    raise FieldError(f"unknown field spec {spec!r}")
