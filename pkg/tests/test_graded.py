from __future__ import annotations

from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from coxblow import (GF, QQ, ConfigSpec, NotInvariantError, PicClass, Polynomial, ResourceLimitExceeded,
                     boundary_invariants, build_linear, build_m0n, discover_generators,
                     discover_relations, enumerate_piece, invariant_basis, is_effective, is_invariant,
                     laurent_rewrite, parse_class)
from coxblow.graded import (boundary_binomial, boundary_class, classes_up_to_weight, evaluate_relation,
                            verify_basis)
from coxblow.model import degree_of_monomial, monomial_weight
from coxblow.polynomial import mono_dense, monomial

from conftest import four_point_spec
from oracles import dense_class, m0n_subsets, monomials_up_to_weight, quadratic_relation_count_m05, \
    sympy_invariant_dim


def m_j(M, j):
    return Polynomial.from_monomial(M.field, M.nvars, monomial([(j, 1)] + [(M.x(e), 1) for e in M.avoiding[j]]))


def test_piece_examples(m5, m6):
    d = parse_class("E{1,2}", m6)
    assert enumerate_piece(m6, d).monomials == (((m6.x(5), 1),),)
    H = PicClass.hyperplane(m5.E)
    assert {m5.fmt(Polynomial.from_monomial(QQ, m5.nvars, mm)) for mm in enumerate_piece(m5, H).monomials} == \
        {m5.fmt(m_j(m5, j)) for j in range(4)}
    assert len(enumerate_piece(m5, -H)) == 0


@settings(max_examples=25)
@given(st.sampled_from(["m5", "lin4"]), st.integers(0, 2), st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_piece_completeness_by_scan(which, dH, dE):
    M = build_m0n(5) if which == "m5" else build_linear(four_point_spec())
    d = PicClass(dH, tuple(dE))
    piece = enumerate_piece(M, d)
    w = M.class_weight(d)
    for mm in piece.monomials:
        assert degree_of_monomial(M, mm) == d and monomial_weight(M, mm) == w
    sets = [frozenset(j + 1 for j in s) for s in M.incidence_sets]
    scanned = {v for v in monomials_up_to_weight(M.weights, max(w, 0))
               if dense_class(sets, M.m, v) == d.vector()}
    assert scanned == {mono_dense(mm, M.nvars) for mm in piece.monomials}


@pytest.mark.parametrize("n", [5, 6, 7])
def test_hyperplane_invariants(n):
    M = build_m0n(n)
    basis = invariant_basis(M, PicClass.hyperplane(M.E))
    assert basis.dimension == n - 2
    last = m_j(M, M.m - 1)
    span = [m_j(M, i) - last for i in range(M.m - 1)]
    from coxblow.linalg import row_space_dim
    vecs = [f.coefficient_vector(basis.piece.monomials) for f in span]
    assert row_space_dim(vecs + [list(v) for v in basis.vectors], QQ) == n - 2


def test_zero_and_negative_classes(m6):
    assert is_effective(m6, PicClass.zero(m6.E)) == (True, 1)
    assert is_effective(m6, -PicClass.hyperplane(m6.E)) == (False, 0)
    assert is_effective(m6, parse_class("E{1,2}", m6)) == (True, 1)


def test_del_pezzo_anticanonical(lin4):
    d = parse_class("3H - E1 - E2 - E3 - E4", lin4)
    piece = enumerate_piece(lin4, d)
    assert len(piece) == 16
    dense = [mono_dense(mm, lin4.nvars) for mm in piece.monomials]
    expected = sympy_invariant_dim([{1}, {2}, {3}, {4}], [1, 1, 1, -1], dense)
    assert expected == 6
    assert is_effective(lin4, d) == (True, 6)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_boundary_suite(n):
    M = build_m0n(n)
    items = boundary_invariants(M)
    assert len(items) == M.E + (n - 1) * (n - 2) // 2
    for d, f in items:
        assert is_invariant(M, f)
        assert all(degree_of_monomial(M, mm) == d for mm in f.terms)
        basis = invariant_basis(M, d)
        assert basis.dimension == 1
        assert len(enumerate_piece(M, d)) == (1 if d.dH == 0 else 2)
        assert basis.polynomials[0] in (f, -f)


def test_boundary_oracle_n5(m5):
    sets = m0n_subsets(5)
    for i, j in combinations(range(4), 2):
        piece = enumerate_piece(m5, boundary_class(m5, i, j))
        dense = [mono_dense(mm, m5.nvars) for mm in piece.monomials]
        assert sympy_invariant_dim(sets, [1, 1, 1, 1], dense) == 1


def test_boundary_binomials_rank(m5):
    from coxblow.linalg import row_space_dim
    polys = [boundary_binomial(m5, i, j) for i, j in combinations(range(4), 2)]
    monos = sorted({mm for f in polys for mm in f.terms})
    assert row_space_dim([f.coefficient_vector(monos) for f in polys], QQ) == 6


def test_boundary_requires_m0n(lin4):
    with pytest.raises(ValueError):
        boundary_invariants(lin4)


def test_generators_n5(m5):
    gens = discover_generators(m5, 3)
    texts = [m5.fmt(g.polynomial) for g in gens]
    assert texts[:4] == ["x{1}", "x{2}", "x{3}", "x{4}"]
    expected = {f"y{i + 1}*x{{{j + 1}}} - y{j + 1}*x{{{i + 1}}}" for i, j in combinations(range(4), 2)}
    assert set(texts[4:]) == expected
    assert [g.weight for g in gens] == [1] * 4 + [3] * 6
    assert [g.index for g in gens] == list(range(10))
    assert discover_generators(m5, 8) == gens


def test_relations_n5(m5):
    gens = discover_generators(m5, 6)
    assert discover_relations(m5, 2, gens[:4]) == []
    rels = discover_relations(m5, 6, gens)
    assert len(rels) == quadratic_relation_count_m05() == 5
    for r in rels:
        assert len(r.terms) == 3 and all(len(p) == 2 for _, p in r.terms)
        assert evaluate_relation(r, gens).is_zero()


def test_generators_n6_contain_boundary(m6):
    items = boundary_invariants(m6)
    w = max(m6.class_weight(d) for d, _ in items)
    gens = discover_generators(m6, w)
    found = {g.polynomial for g in gens} | {-g.polynomial for g in gens}
    assert all(f in found for _, f in items)
    assert all(is_invariant(m6, g.polynomial) for g in gens)


def test_toric_passthrough_generators():
    M = build_linear(ConfigSpec("linear", r=2, subspaces=(((1, 0, 0),), ((0, 1, 0),))))
    gens = discover_generators(M, 6)
    assert sorted(M.fmt(g.polynomial) for g in gens) == sorted(M.names)
    assert discover_relations(M, 6, gens) == []
    for d in classes_up_to_weight(M, 5):
        assert is_effective(M, d)[1] == len(enumerate_piece(M, d))


def test_cross_model_agreement(m5, lin4):
    for d in classes_up_to_weight(m5, 7):
        assert len(enumerate_piece(m5, d)) == len(enumerate_piece(lin4, d))
        assert is_effective(m5, d) == is_effective(lin4, d)
    g5, g4 = discover_generators(m5, 6), discover_generators(lin4, 6)
    assert len(g5) == len(g4) == 10
    flip = {3: -lin4.var(3)}
    for a, b in zip(g5, g4):
        assert a.cls == b.cls
        assert a.polynomial in (b.polynomial.substitute(flip), -b.polynomial.substitute(flip))
    assert len(discover_relations(m5, 6, g5)) == len(discover_relations(lin4, 6, g4))


@pytest.mark.parametrize("n", [5, 6])
def test_laurent_on_generators(n):
    M = build_m0n(n)
    for g in discover_generators(M, 8 if n == 6 else 6):
        cert = laurent_rewrite(M, g.polynomial)
        assert cert.roundtrip_ok
        assert cert.cleared == g.polynomial.mul_monomial(cert.multiplier)


def test_laurent_examples(m6):
    M = m6
    N = M.nvars
    x = M.var(M.x(3))
    cert = laurent_rewrite(M, x)
    assert cert.multiplier == () and cert.laurent_form == x.extend(N + M.m)
    v = lambda j: Polynomial.variable(QQ, N + M.m, N + j)
    for i, j in [(0, 1), (1, 3), (0, M.m - 1)]:
        f = boundary_binomial(M, i, j)
        X = monomial([(M.x(e), 1) for e, s in enumerate(M.incidence_sets) if i in s or j in s])
        vj = v(j) if j != M.m - 1 else Polynomial.zero(QQ, N + M.m)
        expected = (v(i) - vj).mul_monomial(X)
        assert laurent_rewrite(M, f).laurent_form == expected
    f = m_j(M, 0) - m_j(M, 1)
    cert = laurent_rewrite(M, f)
    allx = monomial([(M.x(e), 1) for e in range(M.E)])
    assert cert.laurent_form == (v(0) - v(1)).mul_monomial(allx)
    assert cert.cleared == f.mul_monomial(cert.multiplier)
    with pytest.raises(NotInvariantError):
        laurent_rewrite(M, M.var("y1"))


def _permute_class(M, perm, d):
    index = {s: e for e, s in enumerate(M.incidence_sets)}
    dE = [0] * M.E
    for e, s in enumerate(M.incidence_sets):
        dE[index[frozenset(perm[j] for j in s)]] = d.dE[e]
    return PicClass(d.dH, tuple(dE))


@settings(max_examples=20)
@given(st.sampled_from([5, 6]).flatmap(lambda n: st.tuples(
    st.just(n), st.permutations(range(n - 1)), st.integers(1, 2), st.lists(st.integers(-2, 1), min_size=15,
                                                                            max_size=15))))
def test_symmetric_group_invariance(data):
    n, perm, dH, dE = data
    M = build_m0n(n)
    d = PicClass(dH, tuple(dE[:M.E]))
    e = _permute_class(M, perm, d)
    assert len(enumerate_piece(M, d)) == len(enumerate_piece(M, e))
    assert invariant_basis(M, d).dimension == invariant_basis(M, e).dimension


@pytest.mark.parametrize("p", [101, 32003])
def test_characteristic_consistency(p):
    M, Mp = build_m0n(5), build_m0n(5, GF(p))
    for d in classes_up_to_weight(M, 7):
        assert invariant_basis(M, d).dimension == invariant_basis(Mp, d).dimension
    M6, M6p = build_m0n(6), build_m0n(6, GF(p))
    for d, _ in boundary_invariants(M6):
        assert invariant_basis(M6p, d).dimension == 1
    for M_, Mp_ in ((M, Mp), (M6, M6p), (build_m0n(7), build_m0n(7, GF(p)))):
        H = PicClass.hyperplane(M_.E)
        assert invariant_basis(M_, H).dimension == invariant_basis(Mp_, H).dimension
    assert len(discover_generators(Mp, 6)) == 10
    assert len(discover_relations(Mp, 6)) == 5


def test_substitution_and_derivation_methods_agree(m5):
    for d in classes_up_to_weight(m5, 7):
        a = invariant_basis(m5, d)
        b = invariant_basis(m5, d, method="derivation")
        assert a.vectors == b.vectors
        assert verify_basis(m5, a)
    with pytest.raises(ValueError):
        invariant_basis(build_m0n(5, GF(7)), PicClass.hyperplane(4), method="derivation")


def test_determinism_and_parallelism(m6):
    a = discover_generators(m6, 9, jobs=1)
    b = discover_generators(m6, 9, jobs=2)
    assert a == b == discover_generators(m6, 9)


def test_resource_cap(m6):
    with pytest.raises(ResourceLimitExceeded):
        enumerate_piece(m6, PicClass.hyperplane(m6.E) * 3, max_piece=3)
    with pytest.raises(ResourceLimitExceeded):
        discover_generators(m6, 12, max_monomials=10)


def test_class_iteration_order(m5):
    classes = classes_up_to_weight(m5, 6)
    keys = [(m5.class_weight(d), tuple(-v for v in d.vector())) for d in classes]
    assert keys == sorted(keys)
    assert len(set(classes)) == len(classes)
