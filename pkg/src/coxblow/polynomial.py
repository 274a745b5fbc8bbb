"""Sparse multivariate polynomials with exact coefficients.

A monomial is a tuple of ``(variable_index, exponent)`` pairs sorted by
index, with no zero exponents stored; the constant monomial is ``()``.
Plain tuples keep dictionary lookups cheap, which dominates the runtime of
the graded computations.

The canonical monomial order compares total degree first and then the dense
exponent vectors lexicographically (variable 0 is the most significant).
Polynomials iterate their terms from the largest monomial down, so the first
term printed is the leading one.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import Field, FieldMismatchError, QQ

Monomial = tuple  # tuple[tuple[int, int], ...]

ONE: Monomial = ()


def monomial(exponents: Mapping[int, int] | Iterable[tuple[int, int]]) -> Monomial:
    items = exponents.items() if isinstance(exponents, Mapping) else exponents
    merged: dict[int, int] = {}
    for var, exp in items:
        if exp < 0:
            raise ValueError("negative exponent")
        if exp:
            merged[var] = merged.get(var, 0) + exp
    return tuple(sorted(merged.items()))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, vb = a[i][0], b[j][0]
        if va == vb:
            out.append((va, a[i][1] + b[j][1]))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_pow(a: Monomial, k: int) -> Monomial:
    if k == 0:
        return ONE
    return tuple((v, e * k) for v, e in a)


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """Exact quotient ``b / a``; raises if ``a`` does not divide ``b``."""
    db = dict(b)
    for v, e in a:
        r = db.get(v, 0) - e
        if r < 0:
            raise ValueError("monomial does not divide")
        if r:
            db[v] = r
        else:
            del db[v]
    return tuple(sorted(db.items()))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for v, e in b:
        if e > d.get(v, 0):
            d[v] = e
    return tuple(sorted(d.items()))


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


def mono_dense(a: Monomial, nvars: int) -> tuple[int, ...]:
    vec = [0] * nvars
    for v, e in a:
        vec[v] = e
    return tuple(vec)


def mono_key(a: Monomial, nvars: int):
    """Sort key realising the canonical order (ascending)."""
    return (mono_degree(a), mono_dense(a, nvars))


def sort_monomials(monos: Iterable[Monomial], nvars: int, descending: bool = True) -> list[Monomial]:
    return sorted(monos, key=lambda m: mono_key(m, nvars), reverse=descending)


class Polynomial:
    """Immutable sparse polynomial over ``field`` in ``nvars`` variables."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: Field, nvars: int, terms: Mapping[Monomial, object] | None = None,
                 *, normalized: bool = False):
        self.field = field
        self.nvars = nvars
        if not terms:
            self.terms = {}
        elif normalized:
            self.terms = dict(terms)
        else:
            norm = field.normalize
            clean = {}
            for m, c in terms.items():
                c = norm(c)
                if c:
                    clean[m] = c
            self.terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, field: Field, nvars: int) -> "Polynomial":
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: Field, nvars: int, c=1) -> "Polynomial":
        return cls(field, nvars, {ONE: c})

    @classmethod
    def variable(cls, field: Field, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range")
        return cls(field, nvars, {((index, 1),): 1}, normalized=True)

    @classmethod
    def from_monomial(cls, field: Field, nvars: int, mono: Monomial, c=1) -> "Polynomial":
        return cls(field, nvars, {mono: c})

    # -- basic protocol -------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"field mismatch: {self.field} vs {other.field}")
        if self.nvars != other.nvars:
            raise ValueError(f"variable catalogs differ ({self.nvars} vs {other.nvars})")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self.field, self.nvars, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = Polynomial.constant(self.field, self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.format()})"

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        norm = self.field.normalize
        for m, c in other.terms.items():
            s = norm(out.get(m, 0) + c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.field, self.nvars, out, normalized=True)

    __radd__ = __add__

    def __neg__(self):
        norm = self.field.normalize
        return Polynomial(self.field, self.nvars, {m: norm(-c) for m, c in self.terms.items()},
                          normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Polynomial(self.field, self.nvars)
        out: dict = {}
        get = out.get
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                out[m] = get(m, 0) + ca * cb
        return Polynomial(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if len(self.terms) == 2 and k > 1:
            return self._binomial_power(k)
        result = Polynomial.constant(self.field, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _binomial_power(self, k: int) -> "Polynomial":
        # (a + b)^k term by term; over F_p most binomial coefficients vanish
        (ma, ca), (mb, cb) = self.terms.items()
        norm = self.field.normalize
        out = {}
        binom = 1
        for i in range(k + 1):
            c = norm(binom)
            if c:
                c = norm(c * ca ** (k - i) * cb ** i)
                out[mono_mul(mono_pow(ma, k - i), mono_pow(mb, i))] = c
            binom = binom * (k - i) // (i + 1)
        return Polynomial(self.field, self.nvars, out)

    def scale(self, c) -> "Polynomial":
        c = self.field.normalize(c)
        if not c:
            return Polynomial(self.field, self.nvars)
        return Polynomial(self.field, self.nvars, {m: c * v for m, v in self.terms.items()})

    def mul_monomial(self, mono: Monomial, c=1) -> "Polynomial":
        return Polynomial(self.field, self.nvars,
                          {mono_mul(m, mono): v * c for m, v in self.terms.items()})

    # -- structure ------------------------------------------------------
    def monomials(self) -> list[Monomial]:
        """Support in canonical order, leading (largest) monomial first."""
        return sort_monomials(self.terms, self.nvars)

    def items(self):
        return [(m, self.terms[m]) for m in self.monomials()]

    def coefficient(self, mono: Monomial):
        return self.terms.get(mono, 0)

    def leading_coefficient(self):
        return self.terms[self.monomials()[0]] if self.terms else 0

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {v for m in self.terms for v, _ in m}

    def extend(self, nvars: int) -> "Polynomial":
        """The same polynomial viewed in a catalog with ``nvars >= self.nvars`` variables."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink a variable catalog")
        return Polynomial(self.field, nvars, self.terms, normalized=True)

    def restrict(self, nvars: int) -> "Polynomial":
        if any(v >= nvars for m in self.terms for v, _ in m):
            raise ValueError("polynomial involves variables outside the target catalog")
        return Polynomial(self.field, nvars, self.terms, normalized=True)

    def change_field(self, field: Field) -> "Polynomial":
        """Map coefficients into ``field`` (e.g. reduce a rational polynomial mod p)."""
        return Polynomial(field, self.nvars, self.terms)

    def substitute(self, images: Mapping[int, "Polynomial"], nvars: int | None = None) -> "Polynomial":
        """Replace variable ``v`` by ``images[v]``; other variables are kept.

        All images must live in a catalog of ``nvars`` variables (default:
        ``self.nvars``); kept variables are re-embedded in that catalog.
        """
        nvars = self.nvars if nvars is None else nvars
        field = self.field
        for img in images.values():
            if img.field != field:
                raise FieldMismatchError("substitution image over a different field")
            if img.nvars != nvars:
                raise ValueError("substitution images must share one catalog")
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(v, e):
            p = powers.get((v, e))
            if p is None:
                prev = powers.get((v, e - 1))
                p = prev * images[v] if prev is not None else images[v] ** e
                powers[(v, e)] = p
            return p

        out: dict = {}
        for m, c in self.terms.items():
            kept = []
            acc = None
            for v, e in m:
                if v in images:
                    p = power(v, e)
                    acc = p if acc is None else acc * p
                else:
                    kept.append((v, e))
            kept = tuple(kept)
            if acc is None:
                out[kept] = out.get(kept, 0) + c
                continue
            for mm, cc in acc.terms.items():
                key = mono_mul(mm, kept)
                out[key] = out.get(key, 0) + c * cc
        return Polynomial(field, nvars, out)

    def coefficient_vector(self, basis: Sequence[Monomial]) -> list:
        index = {m: i for i, m in enumerate(basis)}
        vec = [0] * len(basis)
        for m, c in self.terms.items():
            try:
                vec[index[m]] = c
            except KeyError:
                raise ValueError("polynomial has support outside the given basis") from None
        return vec

    @classmethod
    def from_vector(cls, field: Field, nvars: int, basis: Sequence[Monomial], vec) -> "Polynomial":
        return cls(field, nvars, {m: c for m, c in zip(basis, vec) if c})

    # -- text and JSON --------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"v{i}" for i in range(self.nvars)]
        parts = []
        for k, (m, c) in enumerate(self.items()):
            neg = self.field.characteristic == 0 and c < 0
            mag = -c if neg else c
            body = "*".join(names[v] if e == 1 else f"{names[v]}^{e}" for v, e in m)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if k == 0:
                parts.append(f"-{text}" if neg else text)
            else:
                parts.append(f"{'-' if neg else '+'} {text}")
        return " ".join(parts)

    def to_json(self, names: Sequence[str]) -> list:
        """Terms in canonical order as ``[coefficient_string, [[name, exp], ...]]``."""
        return [[str(c), [[names[v], e] for v, e in m]] for m, c in self.items()]

    @classmethod
    def from_json(cls, data, names: Sequence[str], field: Field) -> "Polynomial":
        index = {n: i for i, n in enumerate(names)}
        terms: dict = {}
        for coeff, mono in data:
            m = monomial((index[name], e) for name, e in mono)
            terms[m] = terms.get(m, 0) + field.parse(coeff)
        return cls(field, len(names), terms)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")


def parse_polynomial(text: str, names: Sequence[str], field: Field = QQ) -> Polynomial:
    """Parse the output of :meth:`Polynomial.format` back into a polynomial."""
    index = {n: i for i, n in enumerate(names)}
    src = text.strip()
    if not src:
        raise ValueError("empty polynomial")
    if src[0] not in "+-":
        src = "+" + src
    pieces = _TERM_SPLIT.split(src)[1:]
    if len(pieces) % 2:
        raise ValueError(f"malformed polynomial: {text!r}")
    terms: dict = {}
    for sign, body in zip(pieces[::2], pieces[1::2]):
        coeff = Fraction(1)
        exps: list[tuple[int, int]] = []
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed term: {body!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            name, _, exp = factor.partition("^")
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            exps.append((index[name], int(exp) if exp else 1))
        if sign == "-":
            coeff = -coeff
        m = monomial(exps)
        terms[m] = terms.get(m, 0) + coeff
    return Polynomial(field, len(names), terms)
