"""Reference implementations that share no code with the package.

They are slow and only meant for desk-scale cross-checks.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import sympy as sp


def m0n_subsets(n: int) -> list[frozenset]:
    return [frozenset(c) for k in range(1, n - 3) for c in combinations(range(1, n), k)]


def brute_force_covers(universe, sets) -> int:
    """Count minimal covers by scanning every subfamily (2^len(sets))."""
    U = frozenset(universe)
    count = 0
    for mask in range(1 << len(sets)):
        chosen = [sets[i] for i in range(len(sets)) if mask >> i & 1]
        if frozenset().union(*chosen) != U:
            continue
        if all(frozenset().union(*(chosen[:i] + chosen[i + 1:])) != U for i in range(len(chosen))):
            count += 1
    return count


def berge_transversals(universe, sets) -> list[frozenset]:
    """Minimal covers as minimal transversals of the dual hypergraph (Berge)."""
    edges = [frozenset(i for i, s in enumerate(sets) if u in s) for u in sorted(universe)]
    tr = [frozenset()]
    for h in edges:
        new = set()
        for t in tr:
            if t & h:
                new.add(t)
            else:
                new.update(t | {v} for v in h)
        tr = [t for t in new if not any(s < t for s in new)]
    return tr


def fraction_kernel(rows, ncols):
    """Right kernel over Q via sympy's nullspace."""
    M = sp.Matrix(rows) if rows else sp.zeros(0, ncols)
    return [[Fraction(int(v.p), int(v.q)) for v in vec] for vec in M.nullspace()]


def fraction_rank(rows) -> int:
    return sp.Matrix(rows).rank() if rows else 0


def scan_degree_monomials(sets, m: int, d_vec, max_total: int):
    """All exponent vectors (a, b) with total degree <= max_total and class d_vec.

    Degree rule: deg y_j = H - sum_{e: j not in S_e} E_e, deg x_e = E_e.
    """
    E = len(sets)
    found = []
    for a in product(range(max_total + 1), repeat=m):
        if sum(a) != d_vec[0]:
            continue
        for b in product(range(max_total + 1 - sum(a)), repeat=E):
            if sum(a) + sum(b) > max_total:
                continue
            cls = [sum(a)] + [b[e] - sum(a[j] for j in range(m) if (j + 1) not in sets[e]) for e in range(E)]
            if cls == list(d_vec):
                found.append(tuple(a) + tuple(b))
    return found


def sympy_invariant_dim(sets, V, monomials, p=None) -> int:
    """Dimension of invariants spanned by ``monomials`` under y_j -> y_j + lam V_j z_j.

    ``monomials`` are dense exponent vectors over y_1..y_m, x_1..x_E.
    """
    m, E = len(V), len(sets)
    ys = sp.symbols(f"y1:{m + 1}")
    xs = sp.symbols(f"x1:{E + 1}")
    lam = sp.Symbol("lam")
    z = [sp.Mul(*[xs[e] for e in range(E) if (j + 1) in sets[e]]) for j in range(m)]
    polys = []
    for mono in monomials:
        polys.append(sp.Mul(*[v ** k for v, k in zip(ys + xs, mono)]))
    c = sp.symbols(f"c0:{len(polys)}")
    f = sum(ci * g for ci, g in zip(c, polys))
    g = f.subs({ys[j]: ys[j] + lam * V[j] * z[j] for j in range(m)}, simultaneous=True)
    eqs = sp.Poly(sp.expand(g - f), *ys, *xs, lam).coeffs()
    if not eqs:
        return len(polys)
    M = sp.Matrix([[sp.diff(e, ci) for ci in c] for e in eqs])
    if p is not None:
        return len(polys) - _rank_mod_p(M.tolist(), p)
    return len(polys) - M.rank()


def _rank_mod_p(rows, p: int) -> int:
    rows = [[int(v) % p for v in r] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def quadratic_relation_count_m05() -> int:
    """Independent count of quadratic relations among the ten n=5 generators."""
    y = sp.symbols("y1:5")
    x = sp.symbols("x1:5")
    gens = list(x) + [y[i] * x[j] - y[j] * x[i] for i, j in combinations(range(4), 2)]

    def cls(expr):
        a_b = sp.Poly(expr, *y, *x).monoms()[0]
        a, b = a_b[:4], a_b[4:]
        return (sum(a),) + tuple(b[e] - sum(a[j] for j in range(4) if j != e) for e in range(4))

    groups: dict = {}
    for g1, g2 in combinations(range(len(gens)), 2):
        p = sp.expand(gens[g1] * gens[g2])
        groups.setdefault(cls(p), []).append(p)
    for g in range(len(gens)):
        p = sp.expand(gens[g] ** 2)
        groups.setdefault(cls(p), []).append(p)
    total = 0
    for ps in groups.values():
        dicts = [sp.Poly(p, *y, *x).as_dict() for p in ps]
        monos = sorted({mm for d in dicts for mm in d})
        M = sp.Matrix([[d.get(mm, 0) for d in dicts] for mm in monos])
        total += len(ps) - M.rank()
    return total


def monomials_up_to_weight(weights, max_weight: int):
    """Every exponent vector whose weighted degree is at most ``max_weight``."""
    out = []

    def rec(i, left, acc):
        if i == len(weights):
            out.append(tuple(acc))
            return
        for k in range(left // weights[i] + 1):
            acc.append(k)
            rec(i + 1, left - k * weights[i], acc)
            acc.pop()

    rec(0, max_weight, [])
    return out


def dense_class(sets, m: int, vec):
    """Class of a dense exponent vector; ``sets`` hold 1-based y indices."""
    a, b = vec[:m], vec[m:]
    return (sum(a),) + tuple(b[e] - sum(a[j] for j in range(m) if (j + 1) not in s)
                             for e, s in enumerate(sets))
