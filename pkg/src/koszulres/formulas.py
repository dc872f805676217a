"""Star multilinear and bipartite bilinear systems: shapes, admissible f0,
determinantal data, degree vectors and closed-form sizes."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, prod
from typing import Sequence

from .blocks import BlockStructure
from .errors import ShapeError

CENTER = "center-vertex"
OUTER = "outer-vertex"
EDGE = "edge"
TRIANGLE = "triangle"
X_ONLY = "x-only"
Y_ONLY = "y-only"
XY = "xy"

STAR_VARIANTS = (CENTER, OUTER, EDGE, TRIANGLE)
BIPARTITE_VARIANTS = (X_ONLY, Y_ONLY, XY)


@dataclass(frozen=True)
class StarShape:
    """Square system where every polynomial is multilinear in all X blocks and one Y block.

    ``E[j]`` counts the polynomials attached to ``Y_{j+1}``.
    """

    structure: BlockStructure
    E: tuple

    def __post_init__(self):
        object.__setattr__(self, "E", tuple(int(e) for e in self.E))
        s = self.structure
        if s.A < 1 or s.B < 1:
            raise ShapeError("a star system needs at least one X block and one Y block")
        if len(self.E) != s.B:
            raise ShapeError(f"E must have {s.B} entries")
        if sum(self.E) != s.N:
            raise ShapeError(f"sum(E) = {sum(self.E)} but N = {s.N}")
        if any(e < b for e, b in zip(self.E, s.beta)):
            raise ShapeError("every E_j must be at least beta_j")

    def degree_of(self, j: int) -> tuple:
        """Multidegree of a polynomial attached to ``Y_j`` (1-based)."""
        s = self.structure
        return (1,) * s.A + tuple(1 if jj == j else 0 for jj in range(1, s.B + 1))

    def square_degrees(self) -> list:
        return [self.degree_of(j) for j in range(1, self.structure.B + 1) for _ in range(self.E[j - 1])]


@dataclass(frozen=True)
class BipartiteShape:
    """Square system of bilinear polynomials, each in one X block and one Y block.

    ``E[i][j]`` counts polynomials in ``X_{i+1}`` and ``Y_{j+1}``.
    """

    structure: BlockStructure
    E: tuple

    def __post_init__(self):
        object.__setattr__(self, "E", tuple(tuple(int(x) for x in row) for row in self.E))
        s = self.structure
        if s.A < 1 or s.B < 1:
            raise ShapeError("a bipartite system needs X and Y blocks")
        if len(self.E) != s.A or any(len(row) != s.B for row in self.E):
            raise ShapeError(f"E must be a {s.A}x{s.B} matrix")
        if any(x < 0 for row in self.E for x in row):
            raise ShapeError("E entries must be nonnegative")
        if sum(map(sum, self.E)) != s.N:
            raise ShapeError("the entries of E must add up to N")
        if any(sum(row) < a for row, a in zip(self.E, s.alpha)):
            raise ShapeError("row sums of E must be at least alpha_i")
        if any(sum(col) < b for col, b in zip(zip(*self.E), s.beta)):
            raise ShapeError("column sums of E must be at least beta_j")

    def degree_of(self, i: int, j: int) -> tuple:
        s = self.structure
        return tuple(1 if ii == i else 0 for ii in range(1, s.A + 1)) + tuple(
            1 if jj == j else 0 for jj in range(1, s.B + 1)
        )

    def square_degrees(self) -> list:
        s = self.structure
        return [
            self.degree_of(i, j)
            for i in range(1, s.A + 1)
            for j in range(1, s.B + 1)
            for _ in range(self.E[i - 1][j - 1])
        ]


def classify_square(structure: BlockStructure, degrees: Sequence[Sequence[int]]):
    """Recognise ``N`` multidegrees as a star or bipartite system.

    Returns ``("star", StarShape)``, ``("bipartite", BipartiteShape)`` or
    ``("generic", None)``.  A system fitting both patterns (one X block) is
    reported as star.
    """
    A, B = structure.A, structure.B
    if len(degrees) != structure.N or A < 1 or B < 1:
        return "generic", None
    degrees = [structure.check_degree(d) for d in degrees]
    star_E = [0] * B
    is_star = True
    for d in degrees:
        xs, ys = d[:A], d[A:]
        if all(x == 1 for x in xs) and sorted(ys) == [0] * (B - 1) + [1]:
            star_E[ys.index(1)] += 1
        else:
            is_star = False
            break
    if is_star:
        try:
            return "star", StarShape(structure, tuple(star_E))
        except ShapeError:
            pass
    E = [[0] * B for _ in range(A)]
    for d in degrees:
        xs, ys = d[:A], d[A:]
        if sorted(xs) != [0] * (A - 1) + [1] or sorted(ys) != [0] * (B - 1) + [1]:
            return "generic", None
        E[xs.index(1)][ys.index(1)] += 1
    try:
        return "bipartite", BipartiteShape(structure, tuple(map(tuple, E)))
    except ShapeError:
        return "generic", None


def classify(structure: BlockStructure, degrees: Sequence[Sequence[int]]):
    """Classify an overdetermined list ``d_0..d_N`` by its square part ``d_1..d_N``."""
    if len(degrees) != structure.N + 1:
        return "generic", None
    return classify_square(structure, degrees[1:])


@dataclass(frozen=True)
class F0Case:
    """Support pattern of f0.  Indices are 1-based block numbers."""

    variant: str
    indices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        arity = {CENTER: 0, OUTER: 1, EDGE: 1, TRIANGLE: 2, X_ONLY: 1, Y_ONLY: 1, XY: 2}
        if self.variant not in arity:
            raise ShapeError(f"unknown f0 case {self.variant!r}")
        if len(self.indices) != arity[self.variant]:
            raise ShapeError(f"case {self.variant} takes {arity[self.variant]} indices")
        if self.variant == TRIANGLE and self.indices[0] == self.indices[1]:
            raise ShapeError("the two Y blocks of a triangle case must differ")

    def d0(self, structure: BlockStructure) -> tuple:
        A, B = structure.A, structure.B
        xs, ys = [0] * A, [0] * B
        v = self.variant
        if v in (CENTER, EDGE, TRIANGLE):
            xs = [1] * A
        if v in (OUTER, EDGE, TRIANGLE, Y_ONLY):
            for j in self.indices:
                if not 1 <= j <= B:
                    raise ShapeError(f"Y block {j} out of range")
                ys[j - 1] = 1
        if v == X_ONLY:
            xs[self.indices[0] - 1] = 1
        if v == XY:
            i, j = self.indices
            if not (1 <= i <= A and 1 <= j <= B):
                raise ShapeError("block index out of range")
            xs[i - 1] = 1
            ys[j - 1] = 1
        return tuple(xs + ys)


def star_cases(structure: BlockStructure) -> list:
    B = structure.B
    out = [F0Case(CENTER)]
    out += [F0Case(OUTER, (j,)) for j in range(1, B + 1)]
    out += [F0Case(EDGE, (j,)) for j in range(1, B + 1)]
    out += [F0Case(TRIANGLE, pair) for pair in combinations(range(1, B + 1), 2)]
    return out


def bipartite_cases(structure: BlockStructure) -> list:
    A, B = structure.A, structure.B
    out = [F0Case(X_ONLY, (i,)) for i in range(1, A + 1)]
    out += [F0Case(Y_ONLY, (j,)) for j in range(1, B + 1)]
    out += [F0Case(XY, (i, j)) for i in range(1, A + 1) for j in range(1, B + 1)]
    return out


def star_case_of(structure: BlockStructure, d0: Sequence[int]) -> F0Case:
    """The star case whose multidegree is ``d0``."""
    d0 = structure.check_degree(d0)
    if not validate_star_d0(structure, d0):
        raise ShapeError(f"{d0} is not an admissible f0 multidegree for a star system")
    A = structure.A
    ys = [j + 1 for j, y in enumerate(d0[A:]) if y]
    if d0[0] == 1:
        return F0Case({0: CENTER, 1: EDGE, 2: TRIANGLE}[len(ys)], tuple(ys))
    if len(ys) != 1:
        raise ShapeError("a constant f0 is not one of the star cases")
    return F0Case(OUTER, tuple(ys))


def validate_star_d0(structure: BlockStructure, d0: Sequence[int]) -> bool:
    d0 = structure.check_degree(d0)
    A = structure.A
    if A < 1 or any(x not in (0, 1) for x in d0):
        return False
    xs, ys = d0[:A], d0[A:]
    if len(set(xs)) != 1:
        return False
    return sum(ys) <= 1 + xs[0]


@dataclass(frozen=True)
class DeterminantalData:
    """Triplet ``(P, D, c)`` plus the permutation ``sigma``.

    ``P`` and ``D`` hold 1-based Y-block numbers; ``sigma[i - 1]`` is the
    image of ``i``.  An empty ``sigma`` means the identity.
    """

    P: frozenset
    D: frozenset
    c: int
    sigma: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "P", frozenset(int(j) for j in self.P))
        object.__setattr__(self, "D", frozenset(int(j) for j in self.D))
        object.__setattr__(self, "sigma", tuple(int(s) for s in self.sigma))

    def sigma_for(self, A: int) -> tuple:
        sigma = self.sigma or tuple(range(1, A + 1))
        if sorted(sigma) != list(range(1, A + 1)):
            raise ShapeError(f"{sigma} is not a permutation of 1..{A}")
        return sigma

    def dual(self, A: int) -> "DeterminantalData":
        """Data ``(D, P, A - c)`` with permutation ``i -> A + 1 - sigma(i)``."""
        sigma = self.sigma_for(A)
        return DeterminantalData(self.D, self.P, A - self.c, tuple(A + 1 - s for s in sigma))


def sylvester_data(structure: BlockStructure) -> DeterminantalData:
    return DeterminantalData(frozenset(range(1, structure.B + 1)), frozenset(), 0)


def is_determinantal_data(structure: BlockStructure, d0: Sequence[int], data: DeterminantalData) -> bool:
    A, B = structure.A, structure.B
    d0 = structure.check_degree(d0)
    if data.P & data.D or (data.P | data.D) != frozenset(range(1, B + 1)):
        return False
    ys = d0[A:]
    in_p = sum(ys[j - 1] for j in data.P)
    in_d = sum(ys[j - 1] for j in data.D)
    if in_p > 1 or in_d > 1:
        return False
    xs = d0[:A]
    if all(x == 1 for x in xs):
        return 0 <= data.c <= A
    if all(x == 0 for x in xs):
        return (data.c == 0 and in_p == 0) or (data.c == A and in_d == 0)
    return False


def enumerate_determinantal_data(shape: StarShape, d0: Sequence[int]) -> list:
    """Every ``(P, D, c)`` valid for ``d0``, with identity sigma."""
    s = shape.structure
    d0 = s.check_degree(d0)
    if not validate_star_d0(s, d0):
        raise ShapeError(f"{d0} is not an admissible f0 multidegree")
    blocks = range(1, s.B + 1)
    out = []
    for size in range(s.B + 1):
        for P in combinations(blocks, size):
            P = frozenset(P)
            D = frozenset(blocks) - P
            for c in range(s.A + 1):
                data = DeterminantalData(P, D, c)
                if is_determinantal_data(s, d0, data):
                    out.append(data)
    return out


def star_degree_vector(shape: StarShape, d0: Sequence[int], data: DeterminantalData) -> tuple:
    """Degree vector ``m`` and the index ``omega`` with K_1 = K_{1, omega+1}, K_0 = K_{0, omega}."""
    s = shape.structure
    d0 = s.check_degree(d0)
    if not validate_star_d0(s, d0) or not is_determinantal_data(s, d0, data):
        raise ShapeError(f"({sorted(data.P)}, {sorted(data.D)}, {data.c}) is not determinantal data for {d0}")
    sigma = data.sigma_for(s.A)
    inverse = {sig: i for i, sig in enumerate(sigma, start=1)}
    beta_d = sum(s.beta[j - 1] for j in data.D)
    m = []
    for i in range(1, s.A + 1):
        before = sum(s.alpha[inverse[k] - 1] for k in range(1, sigma[i - 1]))
        tail = d0[i - 1] if sigma[i - 1] > data.c else -1
        m.append(beta_d + before + tail)
    for j in range(1, s.B + 1):
        if j in data.P:
            m.append(shape.E[j - 1] - s.beta[j - 1] + d0[s.A + j - 1])
        else:
            m.append(-1)
    omega = sum(s.alpha[inverse[k] - 1] for k in range(1, data.c + 1)) + beta_d
    return tuple(m), omega


def validate_bipartite_d0(structure: BlockStructure, d0: Sequence[int]) -> bool:
    d0 = structure.check_degree(d0)
    A = structure.A
    if any(x not in (0, 1) for x in d0):
        return False
    ok = sum(d0[:A]) <= 1 and sum(d0[A:]) <= 1
    if ok and not any(d0):
        warnings.warn("constant f0 (multidegree 0) accepted for a bipartite system", stacklevel=2)
    return ok


def bipartite_degree_vector(shape: BipartiteShape, d0: Sequence[int]) -> tuple:
    s = shape.structure
    d0 = s.check_degree(d0)
    if not validate_bipartite_d0(s, d0):
        raise ShapeError(f"{d0} is not an admissible f0 multidegree for a bipartite system")
    m = [sum(shape.E[i]) - s.alpha[i] + d0[i] for i in range(s.A)]
    return tuple(m + [-1] * s.B)


def star_solution_count(shape: StarShape) -> int:
    s = shape.structure
    multinomial = factorial(sum(s.alpha)) // prod(factorial(a) for a in s.alpha)
    return multinomial * prod(comb(e, b) for e, b in zip(shape.E, s.beta))


def star_matrix_size(shape: StarShape, case: F0Case) -> int:
    """Closed-form rank of K_0 (and K_1) for the given f0 case."""
    s = shape.structure
    ups = Fraction(star_solution_count(shape))
    sa = sum(s.alpha)

    def ratio(j):
        E, b = shape.E[j - 1], s.beta[j - 1]
        return Fraction(b, E - b + 1)

    v = case.variant
    if v == CENTER:
        size = ups * (1 + sa)
    elif v == OUTER:
        (j,) = case.indices
        E, b = shape.E[j - 1], s.beta[j - 1]
        size = ups * Fraction(E + b * sa + 1, E - b + 1)
    elif v == EDGE:
        (j,) = case.indices
        E, b = shape.E[j - 1], s.beta[j - 1]
        size = ups * (1 + sa) * Fraction(E + 1, E - b + 1)
    elif v == TRIANGLE:
        j1, j2 = case.indices
        size = ups * (1 + sa) * (1 + ratio(j1) + ratio(j2))
    else:
        raise ShapeError(f"{v} is not a star case")
    if size.denominator != 1:
        raise ArithmeticError(f"closed-form size {size} is not an integer")
    return int(size)


def degree_list(shape, case: F0Case) -> list:
    """Full list ``d_0..d_N`` for a shape and an f0 case."""
    return [case.d0(shape.structure)] + shape.square_degrees()
