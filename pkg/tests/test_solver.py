import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_mep
from koszulres.errors import MultiplicityUnsupportedError, NotAffineError, ShapeError, SingularMEPError
from koszulres.generate import diagonal_mep, random_mep
from koszulres.solver import (
    MEPInstance,
    atkinson_delta_2ep,
    build_and_partition,
    charpoly_exact,
    det_exact,
    matmul_exact,
    mep_to_system,
    schur_complement,
    solve_exact,
    solve_mep,
    system_to_mep,
)
from oracles import det_sympy, diagonal_slot_solutions, match_sets, operator_determinant_spectra, pencil_eigenvalues

small_rational = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(small_rational, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_exact_matches_sympy(M):
    assert det_exact(M) == det_sympy(M)


def test_det_exact_edge_cases():
    assert det_exact([]) == 1
    assert det_exact([[0, 1], [1, 0]]) == -1
    assert det_exact([[1, 2], [2, 4]]) == 0
    assert det_exact([[0, 0, 1], [0, 1, 0], [1, 0, 0]]) == -1
    with pytest.raises(ShapeError):
        det_exact([[1, 2]])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small_rational, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_charpoly_matches_sympy(M):
    t = sympy.Symbol("t")
    S = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M])
    expected = sympy.Poly(S.charpoly(t).as_expr(), t).all_coeffs()
    assert charpoly_exact(M) == [Fraction(int(c.p), int(c.q)) for c in expected]


def test_solve_exact():
    A = [[2, 1], [1, 3]]
    B = [[1, 0], [0, 1]]
    X = solve_exact(A, B)
    assert matmul_exact(A, X) == [[1, 0], [0, 1]]
    with pytest.raises(ZeroDivisionError):
        solve_exact([[1, 2], [2, 4]], [[1], [1]])


# The worked two-parameter problem.

PRINTED_SCHUR = [
    [Fraction(7, 4), 0, Fraction(-1, 4), Fraction(-1, 2)],
    [Fraction(-3, 4), Fraction(3, 2), Fraction(9, 4), 2],
    [Fraction(-21, 4), -3, Fraction(27, 4), Fraction(5, 2)],
    [Fraction(69, 4), Fraction(19, 2), Fraction(-63, 4), -6],
]

PRINTED_SOLUTIONS = [
    ((1, -1, -3), (1, 1), (1, -3)),
    ((1, 3, 4), (1, 1), (1, -1)),
    ((1, 1, 1), (1, -1), (1, -2)),
    ((1, 1, 2), (1, -3), (1, -3)),
]


def test_worked_mep_system_layout():
    inst, f0 = load_mep("mep_example.json")
    system = mep_to_system(inst)
    # f_1 = (-7 x0 + 12 x1 - 7 x2) y0 + (-3 x0 + 2 x1 - x2) y1
    f1 = system.polys[0]
    y0 = ((1, 0), (0, 0))
    y1 = ((0, 1), (0, 0))
    assert f1.coefficients[((1, 0, 0),) + y0] == -7
    assert f1.coefficients[((0, 1, 0),) + y0] == 12
    assert f1.coefficients[((0, 0, 1),) + y1] == -1
    assert system_to_mep(system).matrices == inst.matrices


def test_worked_mep_partition_and_schur():
    inst, f0 = load_mep("mep_example.json")
    pm = build_and_partition(inst, f0)
    assert pm.split == 8 and len(pm.C) == 12
    assert pm.nnz() <= 60
    C11, C12, C21, C22 = pm.blocks()
    # the f0 rows pair -1 on x0 Y^theta with 5 on x1 Y^theta and -3 on x2 Y^theta
    assert [C22[i][i] for i in range(4)] == [-1] * 4
    assert schur_complement(pm) == PRINTED_SCHUR
    assert charpoly_exact(PRINTED_SCHUR) == [1, -4, -1, 16, -12]


def test_worked_mep_eigenpairs():
    inst, f0 = load_mep("mep_example.json")
    pairs = solve_mep(inst, f0)
    assert len(pairs) == 4
    for lam, y, z in PRINTED_SOLUTIONS:
        pair = min(pairs, key=lambda p: max(abs(a - b) for a, b in zip(p.lam, lam)))
        assert np.allclose(pair.lam, lam, atol=1e-8)
        assert np.allclose(pair.vectors[0], y, atol=1e-8)
        assert np.allclose(pair.vectors[1], z, atol=1e-8)
        assert pair.residual < 1e-8
        shift = sum(c * x for c, x in zip(f0, lam)) / lam[0]
        assert abs(pair.shift - shift) < 1e-8


def test_worked_mep_auto_f0_same_eigenvalues():
    inst, _ = load_mep("mep_example.json")
    expected = [lam for lam, _, _ in PRINTED_SOLUTIONS]
    for seed in (0, 1, 7):
        pairs = solve_mep(inst, seed=seed)
        assert match_sets([p.lam for p in pairs], expected, 1e-8)


def test_solve_after_coordinate_change_maps_back():
    inst, f0 = load_mep("mep_example.json")
    T = [[1, 0, 0], [2, 1, 0], [-1, 3, 1]]
    moved = inst.change_coordinates(T)
    pairs = solve_mep(moved, seed=3)
    # x = T x', so x' = T^{-1} x
    Tinv = np.linalg.inv(np.array(T, dtype=float))
    expected = []
    for lam, _, _ in PRINTED_SOLUTIONS:
        xp = Tinv @ np.array(lam, dtype=float)
        expected.append(xp / xp[0])
    assert match_sets([p.lam for p in pairs], expected, 1e-8)


def test_singular_instance():
    zero = {(t, j): [[0, 0], [0, 0]] for t in (1, 2) for j in range(3)}
    inst = MEPInstance(2, (1, 1), zero)
    with pytest.raises((SingularMEPError, MultiplicityUnsupportedError)):
        solve_mep(inst, seed=0)


def test_eigenvalue_at_infinity_is_reported():
    # M1 singular: one eigenvalue sits at x0 = 0
    inst = MEPInstance(1, (1,), {(1, 0): [[1, 2], [3, 5]], (1, 1): [[1, 0], [0, 0]]})
    with pytest.raises((SingularMEPError, NotAffineError)):
        solve_mep(inst, seed=0)


def test_repeated_eigenvalue_is_rejected():
    M0 = [[1, 0], [0, 1]]
    M1 = [[-2, 0], [0, -2]]
    inst = MEPInstance(1, (1,), {(1, 0): M0, (1, 1): M1})
    with pytest.raises(MultiplicityUnsupportedError):
        solve_mep(inst, seed=0)


def test_instance_validation():
    with pytest.raises(ShapeError):
        MEPInstance(1, (1,), {(1, 0): [[1, 0], [0, 1]]})
    with pytest.raises(ShapeError):
        MEPInstance(1, (1,), {(1, 0): [[1]], (1, 1): [[1]]})
    with pytest.raises(ShapeError):
        MEPInstance(0, (), {})


def test_float_instance_solves():
    rng = random.Random(4)
    inst = random_mep(2, (1, 2), rng)
    as_float = MEPInstance(
        inst.alpha, inst.betas, {k: [[float(x) + 0.0 for x in r] for r in M] for k, M in inst.matrices.items()}
    )
    assert as_float.arithmetic == "float64"
    exact = solve_mep(inst, seed=1)
    approx = solve_mep(as_float, seed=1)
    assert match_sets([p.lam for p in approx], [p.lam for p in exact], 1e-7)


def test_random_pairs_have_small_residuals():
    rng = random.Random(8)
    for _ in range(5):
        inst = random_mep(2, (1, 1), rng)
        for p in solve_mep(inst, seed=2):
            assert p.residual < 1e-7 * max(1.0, max(abs(x) for x in p.lam)) ** 2


def test_atkinson_library_matches_oracle():
    rng = random.Random(9)
    inst = random_mep(2, (1, 2), rng)
    d0, d1, d2 = atkinson_delta_2ep(inst)
    lib1 = np.linalg.eigvals(np.linalg.solve(d0, d1))
    lib2 = np.linalg.eigvals(np.linalg.solve(d0, d2))
    o1, o2 = operator_determinant_spectra(inst)
    assert match_sets(lib1, o1, 1e-8) and match_sets(lib2, o2, 1e-8)
    with pytest.raises(ShapeError):
        atkinson_delta_2ep(random_mep(1, (1,), rng))


def test_one_parameter_matches_pencil():
    rng = random.Random(12)
    inst = random_mep(1, (3,), rng)
    pairs = solve_mep(inst, seed=0)
    assert match_sets([p.lam[1] for p in pairs], pencil_eigenvalues(inst), 1e-8)


def test_diagonal_instance():
    rng = random.Random(13)
    inst = diagonal_mep(2, (1, 1), rng)
    pairs = solve_mep(inst, seed=0)
    expected = [(1.0,) + sol for sol in diagonal_slot_solutions(inst)]
    assert match_sets([p.lam for p in pairs], expected, 1e-10)
