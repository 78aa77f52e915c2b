"""Exact scalar fields: the rationals and GF(p) for odd primes p.

Rational scalars are plain :class:`fractions.Fraction` values. Residues mod p
are :class:`Residue` instances. Both support the usual arithmetic operators,
so the rest of the package never needs to know which field it is working in.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import Char2Rejected, EvenOrCompositeModulus, ParseError, ZeroDenominator


class FieldKind(enum.Enum):
    RATIONALS = "rational"
    PRIME_FIELD = "gfp"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n % 3 == 0:
        return n == 3
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: FieldKind = FieldKind.RATIONALS
    modulus: int | None = None

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.modulus is not None:
                raise ValueError("rational field takes no modulus")
            return
        p = self.modulus
        if p is None or p < 2:
            raise EvenOrCompositeModulus(f"modulus must be an odd prime, got {p}")
        if p == 2:
            raise Char2Rejected("characteristic 2 is not supported")
        if not is_prime(p):
            raise EvenOrCompositeModulus(f"modulus must be an odd prime, got {p}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(FieldKind.PRIME_FIELD, p)

    def to_json(self) -> dict:
        if self.kind is FieldKind.RATIONALS:
            return {"kind": "rational"}
        return {"kind": "gfp", "p": self.modulus}

    @classmethod
    def from_json(cls, doc: dict) -> "FieldSpec":
        if not isinstance(doc, dict):
            raise ParseError(f"scalars must be an object, got {doc!r}")
        kind = doc.get("kind")
        if kind == "rational":
            return cls.rationals()
        if kind == "gfp":
            if not isinstance(doc.get("p"), int):
                raise ParseError("gfp scalars need an integer 'p'")
            return cls.prime(doc["p"])
        raise ParseError(f"unknown scalar kind {kind!r}")

    def __str__(self):
        return "QQ" if self.kind is FieldKind.RATIONALS else f"GF({self.modulus})"


class Residue:
    """An element of GF(p), stored as its canonical representative 0..p-1."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise TypeError("residues from different fields")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "Residue":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero residue")
        return Residue(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero residue")
        return Residue(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.p) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.value - o) % self.p == 0

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


_SCALAR_RE = re.compile(r"^\s*([-−]?)(\d+)(?:/(\d+))?\s*$")


class Field:
    """Arithmetic context for one FieldSpec.

    Instances are immutable and cached per spec, so ``make_field(s) is
    make_field(s)``.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.zero = self(0)
        self.one = self(1)

    @property
    def characteristic(self) -> int:
        return self.spec.modulus or 0

    def __call__(self, value):
        """Coerce an int, Fraction, Residue or scalar string into this field."""
        if isinstance(value, str):
            return parse_scalar(value, self)
        if self.spec.kind is FieldKind.RATIONALS:
            if isinstance(value, Residue):
                raise TypeError("cannot coerce a residue into the rationals")
            return Fraction(value)
        p = self.spec.modulus
        if isinstance(value, Residue):
            if value.p != p:
                raise TypeError("residue from a different field")
            return value
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return Residue(value.numerator * pow(value.denominator, -1, p), p)
        return Residue(int(value), p)

    def add(self, a, b):
        return a + b

    def negate(self, a):
        return -a

    def multiply(self, a, b):
        return a * b

    def invert(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if isinstance(a, Residue):
            return a.inverse()
        return 1 / a

    def equal(self, a, b) -> bool:
        return a == b

    def render(self, a) -> str:
        return render_scalar(a)

    def parse(self, text: str):
        return parse_scalar(text, self)

    def __eq__(self, other):
        return isinstance(other, Field) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"Field({self.spec})"


@lru_cache(maxsize=None)
def make_field(spec: FieldSpec | None = None) -> Field:
    return Field(spec or FieldSpec.rationals())


QQ = make_field(FieldSpec.rationals())


def parse_scalar(text: str, field: Field = QQ):
    """Parse ``-?digits(/digits)?`` into a canonical scalar of ``field``."""
    m = _SCALAR_RE.match(text)
    if not m:
        raise ParseError(f"not a scalar: {text!r}")
    sign, num, den = m.groups()
    n = int(num)
    d = int(den) if den is not None else 1
    if sign:
        n = -n
    if d == 0:
        raise ZeroDenominator(f"zero denominator in {text!r}")
    if field.spec.kind is FieldKind.RATIONALS:
        return Fraction(n, d)
    p = field.spec.modulus
    if d % p == 0:
        raise ZeroDenominator(f"denominator of {text!r} vanishes mod {p}")
    return Residue(n * pow(d, -1, p), p)


def render_scalar(a) -> str:
    if isinstance(a, Residue):
        return str(a.value)
    a = Fraction(a)
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"
