"""Exact scalar arithmetic over the rationals, prime fields, and the integers.

Raw values are plain Python objects: `Fraction` for rationals and canonical
`int` representatives for prime fields (in `[0, p)`) and for the integers.
Domain objects know how to combine, parse, and format raw values; `Scalar`
pairs a value with its domain for the operator-based surface.

Serialized forms are always strings, never floats: ``"a/b"`` (denominator
omitted when 1), ``"k mod p"``, and ``"n"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import FieldMismatchError, InexactDivisionError

__all__ = [
    "Domain",
    "RationalField",
    "PrimeField",
    "IntegerRing",
    "QQ",
    "ZZ",
    "GF",
    "Scalar",
    "domain_from_token",
]


class Domain:
    """A scalar domain: arithmetic, parsing, and formatting of raw values."""

    tag = "?"
    token = "?"
    is_field = True

    zero = None
    one = None

    def coerce(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def div(self, a, b):
        raise NotImplementedError

    def parse(self, text):
        raise NotImplementedError

    def format(self, v):
        raise NotImplementedError

    def __repr__(self):
        return self.tag


class RationalField(Domain):
    tag = "rational"
    token = "q"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, bool):
            raise TypeError("cannot coerce bool into the rational field")
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Scalar):
            if x.domain is not self:
                raise FieldMismatchError(f"cannot coerce {x.domain.tag} scalar into {self.tag}")
            return x.value
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.tag}")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return a / b  # raises ZeroDivisionError for b == 0

    def parse(self, text):
        try:
            return Fraction(text.strip())
        except ZeroDivisionError:
            raise ValueError(f"invalid rational (zero denominator): {text!r}") from None
        except (ValueError, AttributeError):
            raise ValueError(f"invalid rational: {text!r}") from None

    def format(self, v):
        return str(v)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


_MOD_RE = re.compile(r"^\s*(-?\d+)\s*mod\s*(\d+)\s*$")


class PrimeField(Domain):
    def __init__(self, p):
        if not isinstance(p, int) or not _is_prime(p):
            raise ValueError(f"modulus must be prime, got {p!r}")
        self.p = p
        self.tag = f"prime_field({p})"
        self.token = f"fp:{p}"
        self.zero = 0
        self.one = 1 % p

    def coerce(self, x):
        if isinstance(x, bool):
            raise TypeError("cannot coerce bool into a prime field")
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Scalar):
            if x.domain != self:
                raise FieldMismatchError(f"cannot coerce {x.domain.tag} scalar into {self.tag}")
            return x.value
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.tag}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return -a % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError(f"division by zero in {self.tag}")
        return a * pow(b, -1, self.p) % self.p

    def parse(self, text):
        m = _MOD_RE.match(text)
        if m:
            k, p = int(m.group(1)), int(m.group(2))
            if p != self.p:
                raise ValueError(f"modulus mismatch: {text!r} vs {self.tag}")
            return k % self.p
        try:
            return int(text.strip()) % self.p
        except ValueError:
            raise ValueError(f"invalid {self.tag} scalar: {text!r}") from None

    def format(self, v):
        return f"{v} mod {self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime_field", self.p))


class IntegerRing(Domain):
    """The integers.  Not a field: division must be exact, elimination is refused."""

    tag = "integer_ring"
    token = "z"
    is_field = False
    zero = 0
    one = 1

    def coerce(self, x):
        if isinstance(x, bool):
            raise TypeError("cannot coerce bool into the integer ring")
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise InexactDivisionError(f"{x} is not an integer")
            return x.numerator
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Scalar):
            if x.domain is not self:
                raise FieldMismatchError(f"cannot coerce {x.domain.tag} scalar into {self.tag}")
            return x.value
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.tag}")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("integer division by zero")
        q, r = divmod(a, b)
        if r:
            raise InexactDivisionError(f"{a} is not divisible by {b}")
        return q

    def parse(self, text):
        try:
            return int(text.strip())
        except ValueError:
            raise ValueError(f"invalid integer: {text!r}") from None

    def format(self, v):
        return str(v)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("integer_ring")


QQ = RationalField()
ZZ = IntegerRing()

_gf_cache = {}


def GF(p):
    """The prime field with `p` elements (cached per modulus)."""
    try:
        return _gf_cache[p]
    except KeyError:
        fld = PrimeField(p)
        _gf_cache[p] = fld
        return fld


def domain_from_token(token):
    """Resolve a CLI field token: ``"q"``, ``"fp:<p>"``, or ``"z"``."""
    if token == "q":
        return QQ
    if token == "z":
        return ZZ
    if token.startswith("fp:"):
        try:
            p = int(token[3:])
        except ValueError:
            raise ValueError(f"bad field token: {token!r}") from None
        return GF(p)
    raise ValueError(f"bad field token: {token!r} (expected q, fp:<p>, or z)")


@dataclass(frozen=True, slots=True)
class Scalar:
    """An immutable scalar tagged with its domain."""

    domain: Domain
    value: object

    @classmethod
    def of(cls, domain, x):
        return cls(domain, domain.coerce(x))

    @classmethod
    def parse(cls, domain, text):
        return cls(domain, domain.parse(text))

    def _peer(self, other):
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {type(other).__name__}")
        if other.domain != self.domain:
            raise FieldMismatchError(f"{self.domain.tag} vs {other.domain.tag}")
        return other.value

    def __add__(self, other):
        return Scalar(self.domain, self.domain.add(self.value, self._peer(other)))

    def __sub__(self, other):
        return Scalar(self.domain, self.domain.sub(self.value, self._peer(other)))

    def __mul__(self, other):
        return Scalar(self.domain, self.domain.mul(self.value, self._peer(other)))

    def __truediv__(self, other):
        return Scalar(self.domain, self.domain.div(self.value, self._peer(other)))

    def __neg__(self):
        return Scalar(self.domain, self.domain.neg(self.value))

    def __bool__(self):
        return self.value != self.domain.zero

    def __str__(self):
        return self.domain.format(self.value)
