"""Random instances: systems with integer coefficients, systems with a
prescribed rational common root, and multiparameter eigenvalue problems."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .blocks import BlockStructure, PolySystem, make_system, monomial_basis
from .solver import MEPInstance


def random_coefficients(structure: BlockStructure, degree, rng: random.Random, bound: int = 9) -> dict:
    return {
        e: Fraction(rng.randint(-bound, bound)) for e in monomial_basis(structure, degree)
    }


def random_system(structure: BlockStructure, degrees: Sequence, rng: random.Random, bound: int = 9) -> PolySystem:
    return make_system(
        structure, [(d, random_coefficients(structure, d, rng, bound)) for d in degrees]
    )


def random_point(structure: BlockStructure, rng: random.Random, bound: int = 3) -> tuple:
    """One nonzero integer coordinate vector per block."""
    point = []
    for n in structure.dims:
        while True:
            coords = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n + 1))
            if any(coords):
                break
        point.append(coords)
    return tuple(point)


def _monomial_value(exponent, point) -> Fraction:
    value = Fraction(1)
    for block, coords in zip(exponent, point):
        for e, x in zip(block, coords):
            if e:
                value *= x**e
    return value


def system_with_root(structure: BlockStructure, degrees: Sequence, rng: random.Random, bound: int = 9):
    """Rational system whose polynomials all vanish at a random point.

    Every coefficient but one is random; the remaining one is solved from
    ``f_k(point) = 0``.  Returns ``(system, point)``.
    """
    while True:
        point = random_point(structure, rng)
        usable = [
            [e for e in monomial_basis(structure, d) if _monomial_value(e, point) != 0]
            for d in degrees
        ]
        if all(usable):
            break
    polys = []
    for d, candidates in zip(degrees, usable):
        pivot = rng.choice(candidates)
        coeffs = {
            e: Fraction(rng.randint(-bound, bound))
            for e in monomial_basis(structure, d)
            if e != pivot
        }
        rest = sum((c * _monomial_value(e, point) for e, c in coeffs.items()), Fraction(0))
        coeffs[pivot] = -rest / _monomial_value(pivot, point)
        polys.append((d, coeffs))
    return make_system(structure, polys), point


def random_mep(alpha: int, betas: Sequence[int], rng: random.Random, bound: int = 10) -> MEPInstance:
    mats = {}
    for t in range(1, alpha + 1):
        size = betas[t - 1] + 1
        for j in range(alpha + 1):
            mats[(t, j)] = [[rng.randint(-bound, bound) for _ in range(size)] for _ in range(size)]
    return MEPInstance(alpha, tuple(betas), mats)


def diagonal_mep(alpha: int, betas: Sequence[int], rng: random.Random, bound: int = 10) -> MEPInstance:
    """MEP whose matrices are all diagonal, so each choice of diagonal slots decouples."""
    mats = {}
    for t in range(1, alpha + 1):
        size = betas[t - 1] + 1
        for j in range(alpha + 1):
            M = [[0] * size for _ in range(size)]
            for i in range(size):
                M[i][i] = rng.randint(-bound, bound)
            mats[(t, j)] = M
    return MEPInstance(alpha, tuple(betas), mats)
