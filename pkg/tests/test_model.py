from __future__ import annotations


import pytest
from hypothesis import given, strategies as st

from coxblow import (GF, QQ, ClassSyntaxError, ConfigError, ConfigSpec, PicClass, build_linear,
                     build_m0n, degree_of_monomial, degree_of_variable, format_class, parse_class)
from coxblow.linalg import ExactMatrix
from coxblow.model import monomial_weight, point_matrix
from coxblow.polynomial import monomial

from conftest import four_point_spec
from oracles import m0n_subsets


@pytest.mark.parametrize("n,E,total", [(5, 4, 8), (6, 15, 20), (7, 41, 47)])
def test_m0n_counts(n, E, total):
    M = build_m0n(n)
    assert (M.m, M.E, M.nvars, M.t) == (n - 1, E, total, 1)
    assert M.derivations == ((1,) * (n - 1),)
    assert M.pic_rank == E + 1


@pytest.mark.parametrize("n", [5, 6, 7])
def test_m0n_incidence_order(n):
    M = build_m0n(n)
    expected = [frozenset(j - 1 for j in s) for s in m0n_subsets(n)]
    assert list(M.incidence_sets) == expected


def test_m0n_rejects_small_n():
    with pytest.raises(ConfigError, match="n >= 5"):
        build_m0n(4)


def test_four_point_model(lin4):
    assert lin4.t == 1 and lin4.E == 4
    assert lin4.derivations == ((1, 1, 1, -1),)
    assert [sorted(s) for s in lin4.incidence_sets] == [[0], [1], [2], [3]]


def test_toric_passthrough():
    M = build_linear(ConfigSpec("linear", r=2, subspaces=(((1, 0, 0),), ((0, 1, 0),))))
    assert M.t == 0 and M.derivations == ()


@pytest.mark.parametrize("blocks", [
    (((1, 0, 0), (2, 0, 0)),),
    (((0, 0, 0),), ((1, 0, 0),)),
])
def test_linear_rejects_degenerate_blocks(blocks):
    with pytest.raises(ConfigError):
        build_linear(ConfigSpec("linear", r=2, subspaces=blocks))


@pytest.mark.parametrize("bad", [
    dict(r=2, subspaces=()),
    dict(r=2, subspaces=(((1, 0),),)),
    dict(r=0, subspaces=(((1,),),)),
])
def test_config_spec_validation(bad):
    with pytest.raises(ConfigError):
        ConfigSpec("linear", **bad)


def test_rational_points_parse_exactly():
    spec = ConfigSpec("linear", r=1, subspaces=((("1/2", 1),), ((0, 1),), ((1, 0),)))
    M = build_linear(spec)
    A = ExactMatrix.from_rows(point_matrix(M))
    assert M.t == 1
    assert not any(A.apply(list(M.derivations[0]), QQ))


def test_variable_degrees(m5, m6, lin4):
    assert format_class(degree_of_variable(m6, "x{1,2}"), m6) == "E{1,2}"
    assert format_class(degree_of_variable(m5, "y1"), m5) == "H - E{2} - E{3} - E{4}"
    assert format_class(degree_of_variable(lin4, "y1"), lin4) == "H - E2 - E3 - E4"


def test_monomial_degrees(m5, m6):
    assert degree_of_monomial(m5, ()).is_zero()
    for j in range(m5.m):
        mj = monomial([(j, 1)] + [(m5.x(e), 1) for e in m5.avoiding[j]])
        assert degree_of_monomial(m5, mj) == PicClass.hyperplane(m5.E)
    z1 = degree_of_monomial(m6, m6.z_exponents[0])
    expected = parse_class("E{1} + E{1,2} + E{1,3} + E{1,4} + E{1,5}", m6)
    assert z1 == expected


def test_parse_class_examples(m6, lin4):
    d = parse_class("H - E{1} - E{2}", m6)
    assert d.dH == 1
    assert [i for i, v in enumerate(d.dE) if v] == [0, 1] and set(d.dE) == {0, -1}
    assert parse_class("3H - E1 - E2 - E3 - E4", lin4).vector() == (3, -1, -1, -1, -1)
    assert parse_class(" 3 H-E1 -E2- E3 -E4 ", lin4).vector() == (3, -1, -1, -1, -1)
    assert parse_class("0", m6).is_zero()
    with pytest.raises(ClassSyntaxError):
        parse_class("E{1,2,3}", m6)
    with pytest.raises(ClassSyntaxError):
        parse_class("H -", m6)
    with pytest.raises(ClassSyntaxError):
        parse_class("E{1}", lin4)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_common_shift_class(n):
    M = build_m0n(n)
    shift = PicClass(-1, (1,) * M.E)
    assert M.shift_class == shift
    for j in range(M.m):
        assert degree_of_monomial(M, M.z_exponents[j]) - degree_of_variable(M, j) == shift
        assert M.z_exponents[j] and all(v >= M.m for v, _ in M.z_exponents[j])
    assert all(w >= 1 for w in M.weights)


@given(st.integers(5, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, 2), min_size=n - 1, max_size=n - 1),
    st.lists(st.integers(0, 2), min_size=n - 1, max_size=n - 1))))
def test_weight_is_constant_on_classes(data):
    n, a1, a2 = data
    M = build_m0n(n)
    # two y-parts with the same dH; pad x-exponents to land in one class
    if sum(a1) != sum(a2):
        return
    d1 = degree_of_monomial(M, monomial(enumerate(a1)))
    d2 = degree_of_monomial(M, monomial(enumerate(a2)))
    diff = (d1 - d2).dE
    lift = max([0] + [-v for v in diff])
    b1 = {M.x(e): lift for e in range(M.E)}
    b2 = {M.x(e): lift + diff[e] for e in range(M.E)}
    m1 = monomial(list(enumerate(a1)) + list(b1.items()))
    m2 = monomial(list(enumerate(a2)) + list(b2.items()))
    assert degree_of_monomial(M, m1) == degree_of_monomial(M, m2)
    assert monomial_weight(M, m1) == monomial_weight(M, m2) == M.class_weight(degree_of_monomial(M, m1))


@given(st.sampled_from([5, 6]).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(-2, 3), st.lists(st.integers(-3, 3), min_size=15, max_size=15))))
def test_class_format_roundtrip(data):
    n, dH, dE = data
    M = build_m0n(n)
    d = PicClass(dH, tuple(dE[:M.E]))
    assert parse_class(format_class(d, M), M) == d


def test_field_carried_through():
    M = build_linear(four_point_spec(GF(101)))
    assert M.field == GF(101)
    assert M.derivations == ((1, 1, 1, 100),)


def test_cross_model_dictionary(m5, lin4):
    # y_j <-> y_j and x{j} <-> x_j; the grading data agree exactly
    assert m5.weights == lin4.weights
    assert m5.var_degrees == lin4.var_degrees
    assert m5.z_exponents == lin4.z_exponents
    assert [abs(v) for v in lin4.derivations[0]] == list(m5.derivations[0])


def test_pickled_model_roundtrip(m6):
    import pickle
    M = pickle.loads(pickle.dumps(m6))
    assert M == m6 and M.names == m6.names
