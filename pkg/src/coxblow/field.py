"""Coefficient fields: the rationals and prime fields F_p.

Scalars are plain Python numbers so that arithmetic stays fast:

* over ``QQ`` an element is an ``int`` or a ``Fraction`` whose denominator is
  greater than one (``Fraction(3, 1)`` is always stored as ``3``);
* over ``GF(p)`` an element is an ``int`` in ``range(p)``.

A field object owns the canonicalisation and the few operations that differ
between the two cases (inversion, reduction, parsing).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational


class FieldMismatchError(ValueError):
    """Raised when scalars or polynomials over different fields are combined."""


class Field:
    characteristic: int = 0

    def normalize(self, value):
        raise NotImplementedError

    def inv(self, value):
        raise NotImplementedError

    def parse(self, text):
        """Parse an integer or ``p/q`` string (or an int/Fraction) into the field."""
        if isinstance(text, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(text, (int, Fraction)):
            return self.normalize(text)
        if isinstance(text, str):
            try:
                q = Fraction(text.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"not an exact rational: {text!r}") from exc
            return self.normalize(q)
        raise TypeError(f"cannot interpret {text!r} as a scalar")

    def check(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatchError(f"field mismatch: {self} vs {other}")


class RationalField(Field):
    characteristic = 0

    def normalize(self, value):
        if isinstance(value, int):
            return value
        if isinstance(value, Fraction):
            return value.numerator if value.denominator == 1 else value
        if isinstance(value, Rational):
            return self.normalize(Fraction(value.numerator, value.denominator))
        raise TypeError(f"not a rational scalar: {value!r}")

    def inv(self, value):
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.normalize(Fraction(1) / value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def descriptor(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        self.p = p
        self.characteristic = p

    def normalize(self, value):
        p = self.p
        if isinstance(value, int):
            return value % p
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        raise TypeError(f"not a scalar for GF({p}): {value!r}")

    def inv(self, value):
        if value % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(value, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def descriptor(self):
        return {"prime": self.p}

    def __reduce__(self):
        return (GF, (self.p,))


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    """Return the prime field with ``p`` elements (``p`` is checked for primality)."""
    from sympy import isprime

    if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
        raise ValueError(f"modulus must be a prime integer, got {p!r}")
    return PrimeField(p)


def field_from_descriptor(desc) -> Field:
    """Inverse of ``Field.descriptor``: ``"Q"`` or ``{"prime": p}``."""
    if desc is None or desc == "Q":
        return QQ
    if isinstance(desc, dict) and set(desc) == {"prime"}:
        return GF(desc["prime"])
    raise ValueError(f'field must be "Q" or {{"prime": p}}, got {desc!r}')


def primitive_scale(vec):
    """Scale a rational vector to coprime integers with positive leading entry."""
    nz = [v for v in vec if v != 0]
    if not nz:
        return list(vec)
    den = 1
    for v in nz:
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if ints[next(i for i, v in enumerate(ints) if v)] < 0:
        g = -g
    return [v // g for v in ints]


def monic_scale(vec, field: PrimeField):
    """Scale a vector over F_p so its leading nonzero entry is 1."""
    for v in vec:
        if v:
            inv = field.inv(v)
            return [w * inv % field.p for w in vec]
    return list(vec)


def canonical_scale(vec, field: Field):
    if field.characteristic == 0:
        return primitive_scale(vec)
    return monic_scale(vec, field)
