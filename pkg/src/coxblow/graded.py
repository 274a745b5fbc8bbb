"""Graded pieces, invariant bases, effectivity, generators and relations.

A monomial ``y^a x^b`` has class ``d`` iff ``sum(a) = dH`` and
``b_e = d_e + sum_{j not in S_e} a_j`` for every ``e``; pieces are enumerated
through this bijection with the admissible ``a``-vectors.  The weight of
``d`` is ``(E + 1) dH + sum(d_E)``, shared by every monomial in the piece.

Generator and relation discovery walk the classes in increasing weight (ties:
decreasing class vector).  Classes with ``dH = 0`` consist of the single
monomial ``x^{d_E}``; beyond weight one these are products of the ``x_e`` and
carry no relations, so they are not visited.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

from .derivation import apply_derivation, group_substitute, is_invariant
from .linalg import canonical_basis, complement_basis, kernel_basis
from .model import BlowupModel, PicClass, degree_of_monomial
from .polynomial import (Monomial, Polynomial, mono_div, mono_lcm, mono_mul, mono_pow,
                         monomial, sort_monomials)

DEFAULT_MAX_PIECE = 20000
DEFAULT_MAX_ENUMERATION = 2_000_000


class ResourceLimitExceeded(RuntimeError):
    """A configured resource cap was hit; says nothing about the mathematics."""


class NotInvariantError(ValueError):
    """Precondition violation: the polynomial is not invariant."""


def _cap(value, env, default):
    if value is not None:
        return value
    raw = os.environ.get(env)
    return int(raw) if raw else default


def max_piece_size(value=None) -> int:
    return _cap(value, "COXBLOW_MAX_PIECE", DEFAULT_MAX_PIECE)


def max_enumeration(value=None) -> int:
    return _cap(value, "COXBLOW_MAX_ENUMERATION", DEFAULT_MAX_ENUMERATION)


# -- pieces ----------------------------------------------------------------------

@dataclass(frozen=True)
class GradedPiece:
    cls: PicClass
    monomials: tuple[Monomial, ...]
    weight: int

    def __len__(self):
        return len(self.monomials)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_piece(model: BlowupModel, d: PicClass, max_piece: int | None = None) -> GradedPiece:
    """All monomials of class ``d`` in canonical order (leading first)."""
    if len(d.dE) != model.E:
        raise ValueError("class does not match the model's Picard rank")
    cap = max_piece_size(max_piece)
    weight = model.class_weight(d)
    if d.dH < 0:
        return GradedPiece(d, (), weight)
    m, E = model.m, model.E
    avoid_by_e = [[j for j in range(m) if j not in s] for s in model.incidence_sets]
    monos = []
    for a in _compositions(d.dH, m) if m else [()]:
        b = [d.dE[e] + sum(a[j] for j in avoid_by_e[e]) for e in range(E)]
        if min(b, default=0) < 0:
            continue
        monos.append(monomial([(j, a[j]) for j in range(m)] + [(m + e, b[e]) for e in range(E)]))
        if len(monos) > cap:
            raise ResourceLimitExceeded(f"piece of class {d.vector()} exceeds {cap} monomials")
    return GradedPiece(d, tuple(sort_monomials(monos, model.nvars)), weight)


# -- invariant bases ------------------------------------------------------------

@dataclass(frozen=True)
class InvariantBasis:
    cls: PicClass
    piece: GradedPiece
    vectors: tuple[tuple, ...]
    polynomials: tuple[Polynomial, ...]

    @property
    def dimension(self) -> int:
        return len(self.vectors)


def substitution_system(model: BlowupModel, piece: GradedPiece) -> list[list]:
    """Rows: coefficients of ``f(y + L z) - f`` on each (parameter, catalog) monomial."""
    N = model.nvars + model.t
    row_index: dict = {}
    cols = []
    for mono in piece.monomials:
        f = Polynomial.from_monomial(model.field, model.nvars, mono)
        diff = group_substitute(model, f) - f.extend(N)
        cols.append(diff.terms)
        for key in diff.terms:
            if key not in row_index:
                row_index[key] = len(row_index)
    rows = [[0] * len(cols) for _ in range(len(row_index))]
    for c, terms in enumerate(cols):
        for key, v in terms.items():
            rows[row_index[key]][c] = v
    return rows


def derivation_system(model: BlowupModel, piece: GradedPiece) -> list[list]:
    """Rows: coefficients of ``D_k f`` for all ``k`` (the characteristic-zero test)."""
    row_index: dict = {}
    cols = []
    for mono in piece.monomials:
        f = Polynomial.from_monomial(model.field, model.nvars, mono)
        terms = {}
        for k in range(model.t):
            for key, v in apply_derivation(model, k, f).terms.items():
                terms[(k, key)] = v
        cols.append(terms)
        for key in terms:
            row_index.setdefault(key, len(row_index))
    rows = [[0] * len(cols) for _ in range(len(row_index))]
    for c, terms in enumerate(cols):
        for key, v in terms.items():
            rows[row_index[key]][c] = v
    return rows


def invariant_basis(model: BlowupModel, d: PicClass, method: str = "substitution",
                    max_piece: int | None = None) -> InvariantBasis:
    """Canonical basis of the invariants of class ``d``.

    ``method="substitution"`` solves the parameter-coefficient system and is
    valid over every field; ``method="derivation"`` intersects the kernels of
    the derivations and is only offered in characteristic zero.
    """
    piece = enumerate_piece(model, d, max_piece)
    n = len(piece)
    fld = model.field
    if n == 0:
        vecs = []
    elif model.t == 0:
        vecs = [[1 if i == k else 0 for i in range(n)] for k in range(n)]
    else:
        if method == "substitution":
            rows = substitution_system(model, piece)
        elif method == "derivation":
            if fld.characteristic:
                raise ValueError("the derivation kernel is not the invariant ring in positive characteristic")
            rows = derivation_system(model, piece)
        else:
            raise ValueError(f"unknown method {method!r}")
        vecs = kernel_basis(rows, fld, n) if rows else [[1 if i == k else 0 for i in range(n)]
                                                        for k in range(n)]
        vecs = canonical_basis(vecs, n, fld) if vecs else []
    polys = tuple(Polynomial.from_vector(fld, model.nvars, piece.monomials, v) for v in vecs)
    return InvariantBasis(d, piece, tuple(tuple(v) for v in vecs), polys)


def is_effective(model: BlowupModel, d: PicClass, max_piece: int | None = None) -> tuple[bool, int]:
    dim = invariant_basis(model, d, max_piece=max_piece).dimension
    return dim > 0, dim


# -- class enumeration --------------------------------------------------------

def _class_order(model: BlowupModel, d: PicClass):
    return (model.class_weight(d), tuple(-v for v in d.vector()))


def _y_vectors(weights: Sequence[int], budget: int):
    """Nonzero exponent vectors ``a`` with ``sum a_j w_j <= budget``."""
    m = len(weights)

    def rec(j, left):
        if j == m:
            yield ()
            return
        for k in range(left // weights[j] + 1):
            for rest in rec(j + 1, left - k * weights[j]):
                yield (k,) + rest

    for a in rec(0, budget):
        if any(a):
            yield a


def enumeration_size(model: BlowupModel, max_weight: int) -> int:
    """Number of monomials with ``dH >= 1`` and weight at most ``max_weight``."""
    wy = model.weights[:model.m]
    E = model.E
    total = 0
    for a in _y_vectors(wy, max_weight):
        left = max_weight - sum(k * w for k, w in zip(a, wy))
        total += comb(E + left, left)
    return total


def classes_up_to_weight(model: BlowupModel, max_weight: int,
                         max_monomials: int | None = None) -> list[PicClass]:
    """Classes with nonempty piece and weight <= ``max_weight`` that discovery visits.

    These are the ``E_e`` (weight one) and every class with ``dH >= 1``.
    """
    cap = max_enumeration(max_monomials)
    size = enumeration_size(model, max_weight)
    if size > cap:
        raise ResourceLimitExceeded(
            f"weight bound {max_weight} needs {size} monomials (cap {cap}; raise COXBLOW_MAX_ENUMERATION)")
    E, m = model.E, model.m
    wy = model.weights[:m]
    found: set[PicClass] = set()
    if max_weight >= 1:
        found.update(PicClass.exceptional(E, e) for e in range(E))
    avoiding = model.avoiding
    for a in _y_vectors(wy, max_weight):
        left = max_weight - sum(k * w for k, w in zip(a, wy))
        base = [0] * E
        for j, k in enumerate(a):
            if k:
                for e in avoiding[j]:
                    base[e] -= k
        dH = sum(a)
        for deg in range(left + 1):
            for xs in combinations_with_replacement(range(E), deg):
                vec = list(base)
                for e in xs:
                    vec[e] += 1
                found.add(PicClass(dH, tuple(vec)))
    return sorted(found, key=lambda d: _class_order(model, d))


# -- generators ------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorRecord:
    polynomial: Polynomial
    cls: PicClass
    weight: int
    index: int


@dataclass(frozen=True)
class RelationRecord:
    """``sum c * prod(generators[i] for i in product) == 0``; products are sorted index tuples."""

    terms: tuple[tuple[object, tuple[int, ...]], ...]
    cls: PicClass
    weight: int
    index: int


class _ProductIndex:
    """Formal products of generators of a given class.

    Generators with ``dH >= 1`` are combined as multisets; the rest of the
    class must then be an effective ``x``-monomial, which is a unique product
    of the ``x_e`` generators.
    """

    def __init__(self, model: BlowupModel, generators: Sequence[GeneratorRecord]):
        self.model = model
        self.gens = list(generators)
        self.x_record = {}
        self.heavy = []
        for g in self.gens:
            if g.cls.dH == 0:
                e = g.cls.dE.index(1)
                self.x_record[e] = g.index
            else:
                self.heavy.append(g)

    def products(self, d: PicClass) -> list[tuple[int, ...]]:
        model = self.model
        heavy = self.heavy
        out = []

        def rec(start, left, chosen):
            if left.dH == 0:
                if min(left.dE, default=0) >= 0:
                    xs = []
                    for e, k in enumerate(left.dE):
                        if k:
                            if e not in self.x_record:
                                return
                            xs.extend([self.x_record[e]] * k)
                    prod = tuple(sorted(chosen + xs))
                    if prod:
                        out.append(prod)
                return
            if model.class_weight(left) <= 0:
                return
            for i in range(start, len(heavy)):
                g = heavy[i]
                if g.cls.dH <= left.dH:
                    rec(i, left - g.cls, chosen + [g.index])

        rec(0, d, [])
        return sorted(set(out))

    def evaluate(self, product: tuple[int, ...], cache: dict) -> Polynomial:
        poly = cache.get(product)
        if poly is None:
            if len(product) == 1:
                poly = self.gens[product[0]].polynomial
            else:
                poly = self.evaluate(product[:-1], cache) * self.gens[product[-1]].polynomial
            cache[product] = poly
        return poly


def _basis_job(args):
    model, d, max_piece = args
    return invariant_basis(model, d, max_piece=max_piece)


def _bases_by_level(model, classes, max_piece, jobs):
    """Invariant bases of ``classes``, computed level by level, in input order."""
    args = [(model, d, max_piece) for d in classes]
    if jobs and jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_basis_job, args, chunksize=max(1, len(args) // (4 * jobs))))
    return [_basis_job(a) for a in args]


def discover_generators(model: BlowupModel, max_weight: int, *, max_piece: int | None = None,
                        max_monomials: int | None = None, jobs: int = 1) -> list[GeneratorRecord]:
    """Minimal generators of the invariant ring up to ``max_weight``.

    A new generator in class ``d`` spans, together with the products of earlier
    generators in ``d``, the whole invariant piece; complements are chosen by
    row reduction in the canonical monomial order, so the output is
    deterministic and independent of ``jobs``.
    """
    if max_weight < 1:
        raise ValueError("max_weight must be positive")
    classes = classes_up_to_weight(model, max_weight, max_monomials)
    bases = _bases_by_level(model, classes, max_piece, jobs)
    fld = model.field
    records: list[GeneratorRecord] = []
    cache: dict = {}
    for d, basis in zip(classes, bases):
        if not basis.dimension:
            continue
        piece = basis.piece
        index = _ProductIndex(model, records)
        span = [index.evaluate(p, cache).coefficient_vector(piece.monomials)
                for p in index.products(d)]
        new = complement_basis(list(basis.vectors), span, len(piece), fld)
        for vec in new:
            poly = Polynomial.from_vector(fld, model.nvars, piece.monomials, vec)
            records.append(GeneratorRecord(poly, d, model.class_weight(d), len(records)))
    return records


def discover_relations(model: BlowupModel, max_weight: int,
                       generators: Sequence[GeneratorRecord] | None = None, *,
                       max_piece: int | None = None, max_monomials: int | None = None,
                       jobs: int = 1) -> list[RelationRecord]:
    """Minimal relations among the generators up to ``max_weight``.

    In each class the relations are the kernel of the evaluation map on formal
    products; those generated by earlier relations (times products of
    generators) are removed before a canonical complement is recorded.
    """
    if generators is None:
        generators = discover_generators(model, max_weight, max_piece=max_piece,
                                         max_monomials=max_monomials, jobs=jobs)
    if any(g.weight > max_weight for g in generators):
        raise ValueError("generators were discovered to a larger weight bound")
    fld = model.field
    index = _ProductIndex(model, generators)
    cache: dict = {}
    relations: list[RelationRecord] = []
    for d in classes_up_to_weight(model, max_weight, max_monomials):
        if d.dH == 0:
            continue
        prods = index.products(d)
        if len(prods) < 2:
            continue
        piece = enumerate_piece(model, d, max_piece)
        cols = [index.evaluate(p, cache).coefficient_vector(piece.monomials) for p in prods]
        rows = [[cols[c][r] for c in range(len(prods))] for r in range(len(piece))]
        kernel = kernel_basis(rows, fld, len(prods))
        if not kernel:
            continue
        pos = {p: i for i, p in enumerate(prods)}
        lower = []
        for rel in relations:
            rest = d - rel.cls
            if rest.dH < 0:
                continue
            for q in index.products(rest):
                vec = [0] * len(prods)
                for c, p in rel.terms:
                    vec[pos[tuple(sorted(p + q))]] = c
                lower.append(vec)
        for vec in complement_basis(kernel, lower, len(prods), fld):
            terms = tuple((c, p) for c, p in zip(vec, prods) if c)
            relations.append(RelationRecord(terms, d, model.class_weight(d), len(relations)))
    return relations


def evaluate_relation(rel: RelationRecord, generators: Sequence[GeneratorRecord]) -> Polynomial:
    out = None
    for c, prod in rel.terms:
        p = generators[prod[0]].polynomial
        for i in prod[1:]:
            p = p * generators[i].polynomial
        p = p.scale(c)
        out = p if out is None else out + p
    return out


# -- boundary invariants ---------------------------------------------------------

def boundary_class(model: BlowupModel, i: int, j: int) -> PicClass:
    """``H - sum_{I avoiding i, j} E_I`` for 0-based ``i != j`` (m0n)."""
    dE = tuple(-1 if (i not in s and j not in s) else 0 for s in model.incidence_sets)
    return PicClass(1, dE)


def boundary_binomial(model: BlowupModel, i: int, j: int) -> Polynomial:
    """``y_i prod_{I ni j, I not ni i} x_I - y_j prod_{I ni i, I not ni j} x_I``."""
    sets = model.incidence_sets
    left = monomial([(i, 1)] + [(model.x(e), 1) for e, s in enumerate(sets) if j in s and i not in s])
    right = monomial([(j, 1)] + [(model.x(e), 1) for e, s in enumerate(sets) if i in s and j not in s])
    return Polynomial(model.field, model.nvars, {left: 1, right: -1})


def boundary_invariants(model: BlowupModel) -> list[tuple[PicClass, Polynomial]]:
    if model.kind != "m0n":
        raise ValueError("boundary invariants are defined for m0n models only")
    out = [(PicClass.exceptional(model.E, e), model.var(model.x(e))) for e in range(model.E)]
    for i in range(model.m):
        for j in range(i + 1, model.m):
            out.append((boundary_class(model, i, j), boundary_binomial(model, i, j)))
    return out


# -- clearing denominators -------------------------------------------------------

@dataclass(frozen=True)
class LaurentCertificate:
    """``multiplier * f == sum c * prod_j B_j^alpha_j * x^beta``.

    ``B_j`` is the boundary binomial of ``(j, normalizer)``, i.e. the cleared
    numerator of ``y_j/z_j - y_n'/z_n'``.  ``laurent_form`` is ``f`` written in
    the differences ``v_j = y_j/z_j - y_n'/z_n'`` (catalog extended by the
    ``v``'s).
    """

    normalizer: int
    laurent_form: Polynomial
    multiplier: Monomial
    terms: tuple[tuple[object, tuple[tuple[int, int], ...], Monomial], ...]
    cleared: Polynomial
    roundtrip_ok: bool


def difference_names(model: BlowupModel) -> tuple[str, ...]:
    return model.names + tuple(f"v{j + 1}" for j in range(model.m))


def laurent_rewrite(model: BlowupModel, f: Polynomial) -> LaurentCertificate:
    """Rewrite an invariant as a polynomial in boundary binomials and ``x``'s.

    Substituting ``y_j -> z_j v_j`` with ``v`` of the last index set to zero
    gives the Laurent form; mapping ``v_j`` back to the cleared differences and
    multiplying by the smallest sufficient ``x``-monomial must recover ``f``.
    """
    if model.kind != "m0n":
        raise ValueError("laurent_rewrite is defined for m0n models")
    m, N = model.m, model.nvars
    j0 = m - 1
    fld = model.field
    NV = N + m
    images = {}
    for j in range(m):
        if j == j0:
            images[j] = Polynomial.zero(fld, NV)
        else:
            images[j] = Polynomial.from_monomial(fld, NV, mono_mul(model.z_exponents[j], ((N + j, 1),)))
    F = f.extend(NV).substitute(images, NV) if f.terms else Polynomial.zero(fld, NV)

    zs = model.z_exponents
    q = {j: mono_lcm(zs[j], zs[j0]) for j in range(m) if j != j0}
    B = {j: boundary_binomial(model, j, j0) for j in q}
    split = []
    multiplier: Monomial = ()
    for mono, c in F.items():
        alpha = tuple((v - N, e) for v, e in mono if v >= N)
        beta = tuple((v, e) for v, e in mono if v < N)
        denom: Monomial = ()
        for j, e in alpha:
            denom = mono_mul(denom, mono_pow(q[j], e))
        need = _quotient_part(denom, beta)
        multiplier = mono_lcm(multiplier, need)
        split.append((c, alpha, beta, denom))

    terms = []
    cleared = Polynomial.zero(fld, N)
    for c, alpha, beta, denom in split:
        xmono = mono_div(mono_mul(beta, multiplier), denom)
        prod = Polynomial.from_monomial(fld, N, xmono, c)
        for j, e in alpha:
            prod = prod * B[j] ** e
        cleared = cleared + prod
        terms.append((c, alpha, xmono))
    ok = cleared == f.mul_monomial(multiplier)
    cert = LaurentCertificate(j0, F, multiplier, tuple(terms), cleared, ok)
    if not ok:
        raise NotInvariantError("roundtrip failed: the polynomial is not invariant")
    return cert


def _quotient_part(denom: Monomial, beta: Monomial) -> Monomial:
    """Smallest monomial ``M`` with ``denom | beta * M``."""
    have = dict(beta)
    return tuple((v, e - have.get(v, 0)) for v, e in denom if e > have.get(v, 0))


def verify_basis(model: BlowupModel, basis: InvariantBasis) -> bool:
    """Every basis element passes the substitution oracle and has class ``d``."""
    for f in basis.polynomials:
        if not is_invariant(model, f):
            return False
        if any(degree_of_monomial(model, mm) != basis.cls for mm in f.terms):
            return False
    return True
