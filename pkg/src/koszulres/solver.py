"""Exact determinants for resultant tests, and the MEP eigenvalue pipeline.

Pipeline: MEP matrices -> bilinear star system -> Sylvester-type Koszul
matrix ``C`` for a linear form ``f0`` -> Schur complement of the ``f0``
block -> eigenpairs -> coordinates read off the extended eigenvectors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .blocks import BlockStructure, PolySystem, make_system
from .errors import (
    DegenerateEigenvectorError,
    ModeError,
    MultiplicityUnsupportedError,
    NotAffineError,
    ShapeError,
    SingularMEPError,
)
from .formulas import F0Case, StarShape, classify_square, star_degree_vector, sylvester_data
from .koszul import assemble_delta1

PIVOT_TOL = 1e-8


# Exact linear algebra over the rationals.

def _as_fraction_rows(M) -> list:
    rows = [[Fraction(x) for x in row] for row in M]
    if any(len(r) != len(rows) for r in rows):
        raise ShapeError("matrix is not square")
    return rows


def det_exact(M) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers, so the elimination runs on Python
    ints and the result is divided back at the end.
    """
    rows = _as_fraction_rows(M)
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    ints = []
    for r in rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
        ints.append([int(x * lcm) for x in r])
        scale *= lcm
    sign = 1
    prev = 1
    a = ints
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1]) / scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def solve_exact(A, B) -> list:
    """Solve ``A X = B`` over the rationals; raises ``ZeroDivisionError`` if ``A`` is singular."""
    A = _as_fraction_rows(A)
    n = len(A)
    B = [[Fraction(x) for x in row] for row in B]
    if len(B) != n:
        raise ShapeError("right-hand side has the wrong number of rows")
    width = len(B[0]) if B else 0
    aug = [A[i] + B[i] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n : n + width] for row in aug]


def matmul_exact(A, B) -> list:
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


def charpoly_exact(M) -> list:
    """Coefficients ``[1, c_1, ..., c_n]`` of ``det(t I - M)`` (Faddeev-LeVerrier)."""
    A = _as_fraction_rows(M)
    n = len(A)
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        prod_ = matmul_exact(A, Mk) if k > 1 else [[Fraction(0)] * n for _ in range(n)]
        Mk = [[prod_[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        AM = matmul_exact(A, Mk)
        coeffs.append(-sum(AM[i][i] for i in range(n)) / k)
    return coeffs


def resultant_vanishes(system: PolySystem, m: Sequence[int]) -> bool:
    """Whether the resultant vanishes at the coefficients of a rational system."""
    if system.arithmetic != "rational":
        raise ModeError("resultant_vanishes needs exact rational coefficients")
    K = assemble_delta1(system.symbolic(), m)
    return det_exact(K.to_fractions(system)) == 0


# Multiparameter eigenvalue problems.

@dataclass(frozen=True)
class MEPInstance:
    """Matrices ``M^{(t, j)}`` for ``t = 1..alpha`` and ``j = 0..alpha``.

    ``matrices[(t, j)]`` is a square nested tuple of size ``betas[t-1] + 1``.
    """

    alpha: int
    betas: tuple
    matrices: dict

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(int(b) for b in self.betas))
        if self.alpha < 1 or len(self.betas) != self.alpha or any(b < 1 for b in self.betas):
            raise ShapeError("need alpha >= 1 and one beta_t >= 1 per parameter")
        mats = {}
        for t in range(1, self.alpha + 1):
            size = self.betas[t - 1] + 1
            for j in range(self.alpha + 1):
                if (t, j) not in self.matrices:
                    raise ShapeError(f"matrix M_{t}_{j} is missing")
                M = tuple(tuple(row) for row in self.matrices[(t, j)])
                if len(M) != size or any(len(r) != size for r in M):
                    raise ShapeError(f"M_{t}_{j} must be {size}x{size}")
                mats[(t, j)] = M
        if set(self.matrices) != set(mats):
            raise ShapeError("unexpected matrix keys")
        object.__setattr__(self, "matrices", mats)

    @property
    def arithmetic(self) -> str:
        exact = all(
            isinstance(x, (int, Fraction)) for M in self.matrices.values() for r in M for x in r
        )
        return "rational" if exact else "float64"

    @property
    def structure(self) -> BlockStructure:
        return BlockStructure((self.alpha,), self.betas)

    def pencil(self, t: int, lam: Sequence) -> np.ndarray:
        return sum(
            complex(lam[j]) * np.array(self.matrices[(t, j)], dtype=complex)
            for j in range(self.alpha + 1)
        )

    def residual(self, lam: Sequence, vectors: Sequence) -> float:
        return max(
            float(np.max(np.abs(self.pencil(t, lam) @ np.asarray(vectors[t - 1], dtype=complex))))
            for t in range(1, self.alpha + 1)
        )

    def change_coordinates(self, T) -> "MEPInstance":
        """Instance in new X coordinates ``x = T x'``."""
        n = self.alpha + 1
        mats = {}
        for t in range(1, self.alpha + 1):
            for jp in range(n):
                size = self.betas[t - 1] + 1
                mats[(t, jp)] = tuple(
                    tuple(
                        sum(T[j][jp] * self.matrices[(t, j)][r][c] for j in range(n))
                        for c in range(size)
                    )
                    for r in range(size)
                )
        return MEPInstance(self.alpha, self.betas, mats)


@dataclass(frozen=True)
class MEPEigenpair:
    lam: tuple
    vectors: tuple
    residual: float
    shift: complex = 0j

    def real(self, tol: float = 1e-9) -> bool:
        values = list(self.lam) + [x for v in self.vectors for x in v]
        return all(abs(complex(x).imag) <= tol for x in values)


def _x_degree(alpha: int, j: int) -> tuple:
    return tuple(1 if i == j else 0 for i in range(alpha + 1))


def _y_unit(beta: int, i: int) -> tuple:
    return tuple(1 if r == i else 0 for r in range(beta + 1))


def mep_to_system(inst: MEPInstance) -> PolySystem:
    """Square bilinear star system ``f_{t,l} = sum_{i,j} M^{(t,j)}[l][i] x_j y_{t,i}``.

    Polynomials are ordered ``f_{1,0}, ..., f_{1,beta_1}, f_{2,0}, ...``.
    """
    s = inst.structure
    polys = []
    for t in range(1, inst.alpha + 1):
        beta = inst.betas[t - 1]
        degree = (1,) + tuple(1 if u == t else 0 for u in range(1, inst.alpha + 1))
        for l in range(beta + 1):
            coeffs = {}
            for j in range(inst.alpha + 1):
                for i in range(beta + 1):
                    c = inst.matrices[(t, j)][l][i]
                    if c != 0:
                        key = [_x_degree(inst.alpha, j)]
                        for u in range(1, inst.alpha + 1):
                            key.append(_y_unit(inst.betas[u - 1], i) if u == t else (0,) * (inst.betas[u - 1] + 1))
                        coeffs[tuple(key)] = c
            polys.append((degree, coeffs))
    system = make_system(s, polys)
    if inst.arithmetic == "rational" and system.arithmetic != "rational":
        system = make_system(s, [(p.multidegree, {k: Fraction(v) for k, v in p.coefficients.items()}) for p in system.polys])
    return system


def system_to_mep(system: PolySystem) -> MEPInstance:
    """Inverse of :func:`mep_to_system`."""
    s = system.structure
    kind, shape = classify_square(s, system.degrees)
    if kind != "star" or s.A != 1 or shape.E != tuple(b + 1 for b in s.beta):
        raise ShapeError("system does not come from a multiparameter eigenvalue problem")
    alpha = s.alpha[0]
    if alpha != s.B:
        raise ShapeError("the X block must have one coordinate per parameter plus one")
    mats = {
        (t, j): [[0] * (s.beta[t - 1] + 1) for _ in range(s.beta[t - 1] + 1)]
        for t in range(1, alpha + 1)
        for j in range(alpha + 1)
    }
    k = 0
    for t in range(1, alpha + 1):
        for l in range(s.beta[t - 1] + 1):
            poly = system.polys[k]
            k += 1
            for key, c in poly.coefficients.items():
                j = key[0].index(1)
                i = key[t].index(1)
                mats[(t, j)][l][i] = c
    return MEPInstance(alpha, s.beta, mats)


@dataclass
class PartitionedMatrix:
    """``C = [[C11, C12], [C21, C22]]``: rows are multipliers ``Y^theta e_k``,
    columns are monomials ``x_j Y^theta``.

    The last ``prod(beta + 1)`` rows are the ``Y^theta f0`` rows and the last
    columns the ``x_0 Y^theta`` monomials, in the same ``theta`` order.
    """

    instance: MEPInstance
    f0: tuple
    C: object
    split: int
    row_labels: list
    col_labels: list
    col_monomials: list
    exact: bool

    def blocks(self):
        s = self.split
        if self.exact:
            C = self.C
            return (
                [r[:s] for r in C[:s]],
                [r[s:] for r in C[:s]],
                [r[:s] for r in C[s:]],
                [r[s:] for r in C[s:]],
            )
        C = self.C
        return C[:s, :s], C[:s, s:], C[s:, :s], C[s:, s:]

    def nnz(self) -> int:
        if self.exact:
            return sum(1 for r in self.C for x in r if x != 0)
        return int(np.count_nonzero(self.C))


def _f0_system(inst: MEPInstance, f0: Sequence, system: PolySystem) -> PolySystem:
    s = inst.structure
    zeros = tuple((0,) * (b + 1) for b in inst.betas)
    exact = system.arithmetic == "rational" and all(isinstance(c, (int, Fraction)) for c in f0)
    coeffs = {
        (_x_degree(inst.alpha, j),) + zeros: (Fraction(c) if exact else c)
        for j, c in enumerate(f0)
        if c != 0
    }
    polys = [((1,) + (0,) * inst.alpha, coeffs)] + [
        (p.multidegree, dict(p.coefficients)) for p in system.polys
    ]
    if not exact:
        polys = [(d, {k: complex(v) if isinstance(v, complex) else float(v) for k, v in c.items()}) for d, c in polys]
    return make_system(s, polys)


def build_and_partition(inst: MEPInstance, f0: Sequence) -> PartitionedMatrix:
    """Sylvester-type matrix of ``(f0, f_1, ..., f_N)`` arranged for the Schur complement."""
    if len(f0) != inst.alpha + 1:
        raise ShapeError(f"f0 needs {inst.alpha + 1} coefficients")
    s = inst.structure
    square = mep_to_system(inst)
    full = _f0_system(inst, f0, square)
    shape = StarShape(s, tuple(b + 1 for b in inst.betas))
    d0 = F0Case("center-vertex").d0(s)
    m, _ = star_degree_vector(shape, d0, sylvester_data(s))
    K = assemble_delta1(full.symbolic(), m)
    exact = full.arithmetic == "rational"

    # Columns of C are rows of K (monomials), rows of C are columns of K.
    x0 = _x_degree(inst.alpha, 0)
    mono_of = [b.parts for b in K.row_basis]
    other_cols = [i for i, parts in enumerate(mono_of) if parts[0][1] != x0]
    x0_cols = [i for i, parts in enumerate(mono_of) if parts[0][1] == x0]
    f0_rows = [j for j, b in enumerate(K.col_basis) if b.wedge == (0,)]
    other_rows = [j for j, b in enumerate(K.col_basis) if b.wedge != (0,)]
    theta_of_col = {tuple(p[1] for p in mono_of[i][1:]): i for i in x0_cols}
    # pair each f0 row with the x0 column of the same Y monomial
    x0_cols = [theta_of_col[tuple(p[1] for p in K.col_basis[j].parts[1:])] for j in f0_rows]
    row_order = other_rows + f0_rows
    col_order = other_cols + x0_cols

    if exact:
        dense = K.to_fractions(full)
        C = [[dense[i][j] for i in col_order] for j in row_order]
    else:
        dense = K.to_array(full)
        C = dense.T[np.ix_(row_order, col_order)]
    return PartitionedMatrix(
        inst,
        tuple(f0),
        C,
        len(other_rows),
        [K.col_basis[j].label(s) for j in row_order],
        [K.row_basis[i].label(s) for i in col_order],
        [mono_of[i] for i in col_order],
        exact,
    )


def schur_complement(pm: PartitionedMatrix, cond_limit: float = 1e12):
    """``C22 - C21 C11^{-1} C12``, exact for rational input."""
    C11, C12, C21, C22 = pm.blocks()
    if pm.exact:
        try:
            X = solve_exact(C11, C12)
        except ZeroDivisionError:
            raise NotAffineError("C11 is singular") from None
        P = matmul_exact(C21, X)
        return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(C22, P)]
    if np.linalg.cond(C11) > cond_limit:
        raise NotAffineError("C11 is numerically singular")
    return C22 - C21 @ np.linalg.solve(C11, C12)


def _extension(pm: PartitionedMatrix) -> np.ndarray:
    """``-C11^{-1} C12`` as a float array."""
    C11, C12, _, _ = pm.blocks()
    if pm.exact:
        return -np.array(solve_exact(C11, C12), dtype=float)
    return -np.linalg.solve(C11, C12)


def schur_eigen(pm: PartitionedMatrix) -> list:
    """Eigenpairs ``(value, vector)`` of the Schur complement, in floating point."""
    S = schur_complement(pm)
    S = np.array(S, dtype=complex if not pm.exact and np.iscomplexobj(S) else float)
    values, vectors = np.linalg.eig(S)
    return [(values[i], vectors[:, i]) for i in range(len(values))]


def _normalize(vec: np.ndarray, tol: float = PIVOT_TOL) -> np.ndarray:
    """Scale so the first non-negligible coordinate is 1."""
    scale = np.max(np.abs(vec))
    idx = next(i for i, x in enumerate(vec) if abs(x) > tol * scale)
    return vec / vec[idx]


def recover_coordinates(pm: PartitionedMatrix, pair, ext: Optional[np.ndarray] = None) -> MEPEigenpair:
    """Read the eigenvalue and eigenvectors off the extended eigenvector.

    ``w = [-C11^{-1} C12 v; v]`` lists the monomials ``x_j Y^theta`` at the
    solution.  The largest ``x_0 Y^theta`` entry is the pivot; every other
    coordinate is a ratio of two entries differing in one variable.
    """
    value, v = pair
    inst = pm.instance
    if ext is None:
        ext = _extension(pm)
    v = np.asarray(v, dtype=complex)
    w = np.concatenate([ext @ v, v])
    top = np.max(np.abs(w))
    if top == 0:
        raise DegenerateEigenvectorError("zero eigenvector")
    index = {}
    for pos, parts in enumerate(pm.col_monomials):
        x = parts[0][1].index(1)
        theta = tuple(p[1] for p in parts[1:])
        index[(x, theta)] = pos
    thetas = [t for (x, t) in index if x == 0]
    pivot = max(thetas, key=lambda t: abs(w[index[(0, t)]]))
    denom = w[index[(0, pivot)]]
    if abs(denom) <= PIVOT_TOL * top:
        raise DegenerateEigenvectorError("no usable pivot among the x0 monomials")
    lam = [1.0 + 0j] + [w[index[(j, pivot)]] / denom for j in range(1, inst.alpha + 1)]
    vectors = []
    for t in range(inst.alpha):
        beta = inst.betas[t]
        coords = []
        for i in range(beta + 1):
            theta = list(pivot)
            theta[t] = _y_unit(beta, i)
            coords.append(w[index[(0, tuple(theta))]] / denom)
        vectors.append(_normalize(np.array(coords)))
    residual = inst.residual(lam, vectors)
    return MEPEigenpair(tuple(lam), tuple(tuple(v) for v in vectors), residual, complex(value))


def min_gap(values) -> float:
    values = list(values)
    if len(values) < 2:
        return float("inf")
    return min(abs(a - b) for a, b in combinations(values, 2))


def _random_invertible(n: int, rng: random.Random) -> list:
    while True:
        T = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        if det_exact(T) != 0:
            return T


def solve_mep(
    inst: MEPInstance,
    f0: Optional[Sequence] = None,
    *,
    seed: Optional[int] = None,
    sep_tol: float = 1e-6,
    f0_tries: int = 8,
    coordinate_tries: int = 5,
) -> list:
    """Eigenpairs of a nonsingular MEP, one per eigenvalue.

    Without ``f0`` an integer form with coefficients in [-1000, 1000] is drawn
    until the shifted eigenvalues are separated.  If ``C11`` is singular the
    X coordinates are changed at random and the problem is solved again.
    """
    rng = random.Random(seed)
    n = inst.alpha + 1
    current, T = inst, None
    for attempt in range(coordinate_tries + 1):
        try:
            pairs, pm = _solve_affine(current, f0, T, rng, sep_tol, f0_tries)
        except NotAffineError:
            T = _random_invertible(n, rng)
            current = inst.change_coordinates(T)
            continue
        if T is None:
            return pairs
        out = []
        for p in pairs:
            lam = [sum(T[j][jp] * p.lam[jp] for jp in range(n)) for j in range(n)]
            if abs(lam[0]) <= PIVOT_TOL * max(abs(x) for x in lam):
                raise SingularMEPError("an eigenvalue lies at x0 = 0")
            lam = [x / lam[0] for x in lam]
            out.append(MEPEigenpair(tuple(lam), p.vectors, inst.residual(lam, p.vectors), p.shift))
        return out
    raise SingularMEPError(f"C11 stayed singular after {coordinate_tries} coordinate changes")


def _solve_affine(inst, f0, T, rng, sep_tol, f0_tries):
    n = inst.alpha + 1
    if f0 is not None and T is not None:
        # express the given form in the new coordinates
        f0_use = [sum(f0[j] * T[j][jp] for j in range(n)) for jp in range(n)]
    else:
        f0_use = f0
    tries = 1 if f0 is not None else f0_tries
    for _ in range(tries):
        form = f0_use if f0_use is not None else [rng.randint(-1000, 1000) for _ in range(n)]
        pm = build_and_partition(inst, form)
        eig = schur_eigen(pm)
        values = [val for val, _ in eig]
        scale = max(1.0, max(abs(x) for x in values)) if values else 1.0
        if min_gap(values) > sep_tol * scale:
            ext = _extension(pm)
            return [recover_coordinates(pm, pair, ext) for pair in eig], pm
    raise MultiplicityUnsupportedError("could not separate the eigenvalues of the Schur complement")


def atkinson_delta_2ep(inst: MEPInstance):
    """Operator determinants ``(Delta0, Delta1, Delta2)`` of a two-parameter problem.

    With ``lambda_0 = 1`` the eigenvalues of ``Delta0^{-1} Delta_i`` are the
    ``lambda_i`` coordinates, in the Kronecker order ``v_1 (x) v_2``.
    """
    if inst.alpha != 2:
        raise ShapeError("the operator determinants are implemented for two parameters only")
    M = {k: np.array(v, dtype=float) for k, v in inst.matrices.items()}
    kron = np.kron
    d0 = kron(M[(1, 1)], M[(2, 2)]) - kron(M[(1, 2)], M[(2, 1)])
    d1 = kron(-M[(1, 0)], M[(2, 2)]) - kron(M[(1, 2)], -M[(2, 0)])
    d2 = kron(M[(1, 1)], -M[(2, 0)]) - kron(-M[(1, 0)], M[(2, 1)])
    return d0, d1, d2
