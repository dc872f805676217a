import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulres.blocks import (
    BlockStructure,
    Polynomial,
    basis_size,
    block_monomials,
    format_monomial_key,
    make_system,
    mhb,
    monomial_basis,
    parse_monomial_key,
    resultant_degree,
)
from koszulres.errors import ArityError, ModeError, ShapeError
from oracles import mhb_by_expansion


def test_block_monomials_order():
    assert block_monomials(1, 2) == ((2, 0), (1, 1), (0, 2))
    assert block_monomials(2, 1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert block_monomials(3, 0) == ((0, 0, 0, 0),)
    assert block_monomials(2, -1) == ()


@given(st.integers(1, 4), st.integers(0, 5))
def test_block_monomials_count_and_sorted(n, d):
    mons = block_monomials(n, d)
    assert len(mons) == comb(n + d, n)
    assert list(mons) == sorted(mons, reverse=True)
    assert all(sum(m) == d for m in mons)


def test_monomial_basis_first_block_most_significant():
    s = BlockStructure((1, 1), ())
    basis = monomial_basis(s, (1, 1))
    assert basis == [((1, 0), (1, 0)), ((1, 0), (0, 1)), ((0, 1), (1, 0)), ((0, 1), (0, 1))]
    assert monomial_basis(s, (1, -1)) == []
    assert basis_size(s, (2, 3)) == 3 * 4


def test_structure_validation():
    with pytest.raises(ShapeError):
        BlockStructure((), ())
    with pytest.raises(ShapeError):
        BlockStructure((0,), (1,))
    s = BlockStructure((1, 2), (3,))
    assert (s.A, s.B, s.q, s.N) == (2, 1, 3, 6)
    assert s.labels == ("X1", "X2", "Y1")
    with pytest.raises(ShapeError):
        s.check_degree((1, 1))


def test_mhb_known_values():
    # two bilinear forms on P1 x P1
    assert mhb(BlockStructure((1, 1), ()), [(1, 1), (1, 1)]) == 2
    # star system with E = (2, 2) on P1 x P1 x P1 x P1
    s = BlockStructure((1, 1), (1, 1))
    degs = [(1, 1, 1, 0)] * 2 + [(1, 1, 0, 1)] * 2
    assert mhb(s, degs) == 8
    # unmixed linear forms
    assert mhb(BlockStructure((3,), ()), [(1,)] * 3) == 1
    assert mhb(BlockStructure((2,), ()), [(2,), (3,)]) == 6


def test_mhb_arity():
    with pytest.raises(ArityError):
        mhb(BlockStructure((1,), ()), [(1,), (1,)])
    with pytest.raises(ArityError):
        resultant_degree(BlockStructure((1,), ()), [(1,)])


def test_mhb_zero_when_some_block_is_uncovered():
    s = BlockStructure((1,), (1,))
    assert mhb(s, [(1, 0), (1, 0)]) == 0


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_mhb_matches_expansion(data):
    dims = data.draw(st.lists(st.integers(1, 3), min_size=1, max_size=3))
    N = sum(dims)
    degrees = data.draw(
        st.lists(st.lists(st.integers(0, 2), min_size=len(dims), max_size=len(dims)), min_size=N, max_size=N)
    )
    s = BlockStructure(tuple(dims), ())
    assert mhb(s, degrees) == mhb_by_expansion(dims, degrees)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_mhb_symmetric_under_reordering(data):
    dims = data.draw(st.lists(st.integers(1, 2), min_size=1, max_size=3))
    N = sum(dims)
    degrees = data.draw(
        st.lists(st.lists(st.integers(0, 2), min_size=len(dims), max_size=len(dims)), min_size=N, max_size=N)
    )
    s = BlockStructure(tuple(dims), ())
    shuffled = data.draw(st.permutations(degrees))
    assert mhb(s, degrees) == mhb(s, shuffled)


def test_resultant_degree_sums_per_poly():
    s = BlockStructure((1, 1), ())
    total, per = resultant_degree(s, [(1, 1)] * 3)
    assert per == (2, 2, 2) and total == 6


def test_monomial_key_round_trip():
    s = BlockStructure((1, 2), (1,))
    for e in monomial_basis(s, (1, 2, 1)):
        key = format_monomial_key(s, e)
        assert parse_monomial_key(s, key) == e
    assert format_monomial_key(s, ((1, 0), (0, 1, 1), (0, 1))) == "X1:[1,0];X2:[0,1,1];Y1:[0,1]"
    with pytest.raises(ShapeError):
        parse_monomial_key(s, "X1:[1,0];X2:[0,1,1]")
    with pytest.raises(ShapeError):
        parse_monomial_key(s, "X1:[1,0];Y1:[0,1,1];X2:[0,1]")
    with pytest.raises(ShapeError):
        parse_monomial_key(s, "X1:[1,0,0];X2:[0,1,1];Y1:[0,1]")


def test_make_system_infers_modes():
    s = BlockStructure((1,), ())
    assert make_system(s, [((1,), None)]).arithmetic == "symbolic"
    sys_q = make_system(s, [((1,), {((1, 0),): 2, ((0, 1),): Fraction(1, 3)})])
    assert sys_q.arithmetic == "rational"
    assert all(isinstance(c, Fraction) for c in sys_q.polys[0].coefficients.values())
    assert make_system(s, [((1,), {((1, 0),): 0.5})]).arithmetic == "float64"
    with pytest.raises(ModeError):
        make_system(s, [((1,), None), ((1,), {((1, 0),): 1})])
    with pytest.raises(ShapeError):
        make_system(s, [((1,), {((2, 0),): 1})])


def test_polynomial_evaluate_and_scale():
    s = BlockStructure((1,), (1,))
    p = {((1, 0), (0, 1)): Fraction(3), ((0, 1), (1, 0)): Fraction(-2)}
    system = make_system(s, [((1, 1), p)])
    point = ((Fraction(2), Fraction(5)), (Fraction(7), Fraction(1)))
    assert system.polys[0].evaluate(point) == 3 * 2 * 1 - 2 * 5 * 7
    scaled = system.scaled(0, Fraction(4))
    assert scaled.polys[0].evaluate(point) == 4 * system.polys[0].evaluate(point)
    assert scaled != system
    with pytest.raises(ModeError):
        Polynomial((1, 1)).evaluate(point)


def test_random_dense_evaluation_matches_manual():
    rng = random.Random(3)
    s = BlockStructure((2,), ())
    coeffs = {e: Fraction(rng.randint(-5, 5)) for e in monomial_basis(s, (2,))}
    p = make_system(s, [((2,), coeffs)]).polys[0]
    x = (Fraction(1), Fraction(-2), Fraction(3))
    manual = sum(c * x[0] ** e[0][0] * x[1] ** e[0][1] * x[2] ** e[0][2] for e, c in coeffs.items())
    assert p.evaluate((x,)) == manual
