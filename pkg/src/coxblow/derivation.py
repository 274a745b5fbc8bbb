"""The additive group action, its derivations, invariance and fixed locus.

Invariance is decided by the substitution condition ``f(y + L z, x) = f``
with the group parameters adjoined as genuine variables.  In characteristic
zero this agrees with ``D_k f = 0`` for every derivation, but over F_p the
derivation kernel also contains e.g. ``y_1^p``, which is not invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import BlowupModel
from .polynomial import Polynomial, mono_mul


def apply_derivation(model: BlowupModel, k: int, f: Polynomial) -> Polynomial:
    """``D_k(f) = sum_j V[k][j] z_j df/dy_j`` for the 0-based derivation row ``k``."""
    if not 0 <= k < model.t:
        raise IndexError(f"derivation index {k} out of range (model has t={model.t})")
    _check_catalog(model, f)
    row = model.derivations[k]
    zs = model.z_exponents
    m = model.m
    out: dict = {}
    get = out.get
    for mono, c in f.terms.items():
        for pos, (v, e) in enumerate(mono):
            if v >= m:
                break
            a = row[v]
            if not a:
                continue
            lowered = mono[:pos] + (((v, e - 1),) if e > 1 else ()) + mono[pos + 1:]
            new = mono_mul(lowered, zs[v])
            out[new] = get(new, 0) + c * e * a
    return Polynomial(model.field, model.nvars, out)


def lambda_index(model: BlowupModel, k: int) -> int:
    """Catalog index of the group parameter ``lambda_{k+1}`` in the extended catalog."""
    return model.nvars + k


def extended_names(model: BlowupModel) -> tuple[str, ...]:
    return model.names + tuple(f"lam{k + 1}" for k in range(model.t))


def group_substitute(model: BlowupModel, f: Polynomial) -> Polynomial:
    """Expand ``f(y_j + (sum_k lam_k V[k][j]) z_j, x)`` exactly.

    The result lives in the catalog extended by ``t`` parameter variables.
    """
    _check_catalog(model, f)
    N = model.nvars + model.t
    fld = model.field
    images = {}
    for j in range(model.m):
        terms = {((j, 1),): 1}
        for k, row in enumerate(model.derivations):
            if row[j]:
                terms[mono_mul(((lambda_index(model, k), 1),), model.z_exponents[j])] = row[j]
        if len(terms) > 1:
            images[j] = Polynomial(fld, N, terms)
    ext = f.extend(N)
    if not images:
        return ext
    return ext.substitute(images)


def is_invariant(model: BlowupModel, f: Polynomial) -> bool:
    """Membership in the invariant ring via the substitution condition."""
    if model.t == 0:
        _check_catalog(model, f)
        return True
    return group_substitute(model, f) == f.extend(model.nvars + model.t)


def in_derivation_kernel(model: BlowupModel, f: Polynomial) -> bool:
    """``D_k f = 0`` for all ``k``; equals invariance only in characteristic zero."""
    return all(apply_derivation(model, k, f).is_zero() for k in range(model.t))


def _check_catalog(model: BlowupModel, f: Polynomial) -> None:
    model.field.check(f.field)
    if f.nvars != model.nvars:
        raise ValueError(f"polynomial has {f.nvars} variables, model catalog has {model.nvars}")


# -- fixed locus -------------------------------------------------------------

@dataclass(frozen=True)
class FixedComponent:
    """Coordinate subspace ``{x_e = 0 : e in indices}`` of the fixed locus."""

    indices: tuple[int, ...]

    def labels(self, model: BlowupModel) -> list[str]:
        return [model.names[model.x(e)] for e in self.indices]


def moved_coordinates(model: BlowupModel) -> frozenset:
    """The ``y_j`` actually moved by the group (nonzero derivation column)."""
    return frozenset(j for j in range(model.m) if any(row[j] for row in model.derivations))


def minimal_hitting_sets(universe: frozenset, sets) -> list[tuple[int, ...]]:
    """All inclusion-minimal families of ``sets`` whose union contains ``universe``.

    Backtracking on the smallest uncovered element; a branch is cut as soon as
    some chosen set has no private element, since adding sets cannot restore
    one.  Results are sorted by size, then lexicographically.
    """
    sets = [frozenset(s) & universe for s in sets]
    containing = {u: [e for e, s in enumerate(sets) if u in s] for u in universe}
    if any(not v for v in containing.values()):
        return []
    found: set[tuple[int, ...]] = set()

    def has_private(chosen):
        for i, c in enumerate(chosen):
            others = frozenset().union(*(sets[d] for k, d in enumerate(chosen) if k != i))
            if not sets[c] - others:
                return False
        return True

    def rec(chosen, covered):
        if not has_private(chosen):
            return
        uncovered = universe - covered
        if not uncovered:
            found.add(tuple(sorted(chosen)))
            return
        u = min(uncovered)
        for e in containing[u]:
            rec(chosen + [e], covered | sets[e])

    rec([], frozenset())
    return sorted(found, key=lambda T: (len(T), T))


def fixed_components(model: BlowupModel) -> list[FixedComponent]:
    """Irreducible components of the fixed locus, one per minimal hitting set."""
    if model.t == 0:
        raise ValueError("model has no additive action (t = 0); there is no fixed locus to analyse")
    universe = moved_coordinates(model)
    return [FixedComponent(T) for T in minimal_hitting_sets(universe, model.incidence_sets)]
