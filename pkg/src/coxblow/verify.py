"""Self-verification: independent code paths must agree on one model.

Each check yields a ``Check`` (name, passed, detail).  The CLI ``verify``
command prints them and exits nonzero if any fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .derivation import apply_derivation, fixed_components, in_derivation_kernel, is_invariant
from .graded import (NotInvariantError, boundary_invariants, classes_up_to_weight, discover_generators,
                     discover_relations, enumerate_piece, enumeration_size, evaluate_relation,
                     invariant_basis, laurent_rewrite, verify_basis)
from .linalg import ExactMatrix
from .model import BlowupModel, PicClass, degree_of_monomial, degree_of_variable, point_matrix

VERIFY_ENUMERATION_BUDGET = 50_000


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def default_verify_weight(model: BlowupModel, budget: int = VERIFY_ENUMERATION_BUDGET) -> int:
    """Largest bound <= max y-weight + 4 whose enumeration stays within ``budget``."""
    w = max(model.weights[:model.m]) + 4
    while w > 1 and enumeration_size(model, w) > budget:
        w -= 1
    return w


def run_checks(model: BlowupModel, max_weight: int, jobs: int = 1) -> Iterator[Check]:
    yield from _model_checks(model)
    classes = [d for d in classes_up_to_weight(model, max_weight) if d.dH >= 1]
    bad = []
    for d in classes:
        basis = invariant_basis(model, d)
        if not verify_basis(model, basis):
            bad.append(d)
            continue
        if model.field.characteristic == 0 and model.t:
            alt = invariant_basis(model, d, method="derivation")
            if alt.vectors != basis.vectors:
                bad.append(d)
    yield Check("substitution-vs-derivation", not bad,
                f"{len(classes)} classes up to weight {max_weight}" + (f"; mismatch at {bad[0].vector()}" if bad else ""))

    if model.kind == "m0n":
        yield from _boundary_checks(model)

    gens = discover_generators(model, max_weight, jobs=jobs)
    yield Check("generators-invariant", all(is_invariant(model, g.polynomial) for g in gens),
                f"{len(gens)} generators")
    rels = discover_relations(model, max_weight, gens, jobs=jobs)
    yield Check("relations-evaluate-to-zero", all(evaluate_relation(r, gens).is_zero() for r in rels),
                f"{len(rels)} relations")
    if model.kind == "m0n":
        failed = 0
        for g in gens:
            try:
                laurent_rewrite(model, g.polynomial)
            except NotInvariantError:
                failed += 1
        yield Check("laurent-roundtrip", failed == 0, f"{len(gens) - failed}/{len(gens)} generators")
    if model.t:
        comps = fixed_components(model)
        yield Check("fixed-components-minimal-covers", all(_is_minimal_cover(model, c.indices) for c in comps),
                    f"{len(comps)} components")


def _model_checks(model: BlowupModel) -> Iterator[Check]:
    shift = model.shift_class
    same = all(degree_of_monomial(model, model.z_exponents[j]) - degree_of_variable(model, j) == shift
               for j in range(model.m))
    yield Check("common-shift-class", same)
    yield Check("positive-weights", all(w >= 1 for w in model.weights))
    if model.kind == "linear" and model.t:
        A = ExactMatrix.from_rows(point_matrix(model))
        yield Check("derivations-in-kernel",
                    all(not any(A.apply(list(v), model.field)) for v in model.derivations))
    if model.t:
        ok = True
        for j in range(model.m):
            z = model.z(j)
            ok &= all(apply_derivation(model, k, z).is_zero() for k in range(model.t))
        yield Check("derivations-kill-z", ok)


def _boundary_checks(model: BlowupModel) -> Iterator[Check]:
    ok_inv = ok_dims = True
    items = boundary_invariants(model)
    for d, f in items:
        ok_inv &= is_invariant(model, f) and in_derivation_kernel(model, f)
        ok_inv &= all(degree_of_monomial(model, m) == d for m in f.terms)
        expected = 1 if d.dH == 0 else 2
        basis = invariant_basis(model, d)
        ok_dims &= len(enumerate_piece(model, d)) == expected and basis.dimension == 1
    yield Check("boundary-invariant", ok_inv, f"{len(items)} boundary sections")
    yield Check("boundary-piece-dims", ok_dims)
    psi = invariant_basis(model, PicClass.hyperplane(model.E)).dimension
    yield Check("hyperplane-invariant-dim", psi == model.n - 2, f"dim H = {psi}")


def _is_minimal_cover(model: BlowupModel, T) -> bool:
    from .derivation import moved_coordinates

    universe = moved_coordinates(model)
    sets = model.incidence_sets
    if not universe <= frozenset().union(*(sets[e] for e in T)):
        return False
    return all(not universe <= frozenset().union(*(sets[e] for e in T if e != drop)) for drop in T)
