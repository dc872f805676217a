import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulres.blocks import BlockStructure, make_system
from koszulres.errors import ShapeError
from koszulres.weyman import (
    bott_factor,
    complex_terms,
    dual_degree_vector,
    group_indices,
    is_determinantal,
    rank_tables,
    table_is_determinantal,
)
from oracles import complex_ranks_by_subsets


def symbolic(structure, degrees):
    return make_system(structure, [(d, None) for d in degrees])


def test_bott_rule():
    assert bott_factor(1, 0) == (0, 1, "primal")
    assert bott_factor(2, 3) == (0, 10, "primal")
    assert bott_factor(1, -1) is None
    assert bott_factor(2, -2) is None
    assert bott_factor(1, -2) == (1, 1, "dual")
    assert bott_factor(2, -5) == (2, 6, "dual")
    with pytest.raises(ShapeError):
        bott_factor(0, 1)


@given(st.integers(1, 5), st.integers(-12, 12))
def test_bott_serre_duality(n, a):
    # H^0(O(a)) and H^n(O(-a-n-1)) have the same dimension
    top = bott_factor(n, -a - n - 1)
    bottom = bott_factor(n, a)
    if bottom is None:
        assert top is None
    else:
        assert top is not None and top[1] == bottom[1] and top[0] == n - bottom[0]


def test_group_indices():
    degs = [(1, 1), (1, 1), (1, 0), (1, 1)]
    groups = group_indices(degs)
    assert [g.indices for g in groups] == [(0,), (1, 3), (2,)]
    assert [g.indices for g in group_indices(degs, explicit=True)] == [(0,), (1,), (2,), (3,)]


def test_bilinear_sylvester_complex():
    s = BlockStructure((1, 1), ())
    desc = complex_terms(symbolic(s, [(1, 1)] * 3), (2, -1))
    assert desc.ranks() == {0: 6, 1: 6}
    assert is_determinantal(desc)
    k1 = desc.summands(1)
    assert {sm.p for sm in k1} == {2}
    assert all([f.kind for f in sm.factors] == ["primal", "dual"] for sm in k1)
    assert sorted(w for sm in k1 for w in sm.subsets()) == [(0, 1), (0, 2), (1, 2)]
    k0 = desc.summands(0)
    assert {(sm.p, sm.twist) for sm in k0} == {(1, (1, -2))}


def test_non_determinantal_vector():
    s = BlockStructure((1, 1), ())
    desc = complex_terms(symbolic(s, [(1, 1)] * 3), (0, 0))
    assert not is_determinantal(desc)


def test_explicit_limit():
    s = BlockStructure((21,), ())
    system = symbolic(s, [(1,)] * 22)
    with pytest.raises(ShapeError):
        complex_terms(system, (0,), mode="explicit")
    with pytest.raises(ValueError):
        complex_terms(system, (0,), mode="fancy")


degree_entry = st.integers(0, 2)


@st.composite
def small_systems(draw):
    dims = draw(st.lists(st.integers(1, 2), min_size=1, max_size=3))
    N = sum(dims)
    degrees = draw(
        st.lists(
            st.lists(degree_entry, min_size=len(dims), max_size=len(dims)).filter(any),
            min_size=N + 1,
            max_size=N + 1,
        )
    )
    m = draw(st.lists(st.integers(-4, 5), min_size=len(dims), max_size=len(dims)))
    return BlockStructure(tuple(dims), ()), [tuple(d) for d in degrees], tuple(m)


@settings(max_examples=60, deadline=None)
@given(small_systems())
def test_grouped_explicit_and_subset_oracle_agree(case):
    s, degrees, m = case
    system = symbolic(s, degrees)
    grouped = complex_terms(system, m, mode="grouped").ranks()
    explicit = complex_terms(system, m, mode="explicit").ranks()
    oracle = complex_ranks_by_subsets(s.dims, degrees, m)
    strip = lambda r: {v: d for v, d in r.items() if d}  # noqa: E731
    assert strip(grouped) == strip(explicit) == oracle


@settings(max_examples=40, deadline=None)
@given(small_systems())
def test_rank_tables_match_complex_terms(case):
    s, degrees, m = case
    desc = complex_terms(symbolic(s, degrees), m, mode="grouped")
    (table,) = rank_tables(s, degrees, [m])
    by_v = {}
    for (v, _), d in table.items():
        by_v[v] = by_v.get(v, 0) + d
    assert by_v == {v: d for v, d in desc.ranks().items() if d}
    assert table_is_determinantal(table) == is_determinantal(desc)


@settings(max_examples=40, deadline=None)
@given(small_systems())
def test_euler_characteristic_is_zero(case):
    # for a generic overdetermined system the complex is exact, so its
    # alternating rank sum vanishes
    s, degrees, m = case
    ranks = complex_terms(symbolic(s, degrees), m).ranks()
    assert sum((-1) ** v * d for v, d in ranks.items()) == 0


def test_dual_degree_vector_swaps_ranks():
    s = BlockStructure((1, 1), (1, 1))
    degrees = [(1, 1, 0, 0)] + [(1, 1, 1, 0)] * 2 + [(1, 1, 0, 1)] * 2
    m = (0, 3, 1, -1)
    md = dual_degree_vector(m, degrees, s)
    a = complex_terms(symbolic(s, degrees), m)
    b = complex_terms(symbolic(s, degrees), md)
    assert is_determinantal(a) and is_determinantal(b)
    assert a.rank(0) == b.rank(0) == 24
    assert dual_degree_vector(md, degrees, s) == m
