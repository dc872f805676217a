"""Block structures, multidegrees, monomial bases and Bezout-type counts.

Conventions used throughout the package:

* Blocks are ordered ``X1..XA, Y1..YB``.  Block ``Xi`` has ``alpha[i] + 1``
  variables and ``Yj`` has ``beta[j] + 1``; the projective dimensions are
  ``structure.dims``.
* A multidegree is a plain tuple of ``q = A + B`` integers in that block order.
* An exponent vector is a tuple of per-block exponent tuples, e.g.
  ``((1, 0), (0, 1))`` for ``x_{1,0} * x_{2,1}``.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import comb, prod
from typing import Mapping, Optional, Sequence

from .errors import ArityError, ModeError, ShapeError

Multidegree = tuple
ExponentVector = tuple

ARITHMETIC_MODES = ("symbolic", "rational", "float64")


@dataclass(frozen=True)
class BlockStructure:
    """Layout of the variable blocks: ``A`` X-blocks and ``B`` Y-blocks."""

    alpha: tuple = ()
    beta: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        if not self.alpha and not self.beta:
            raise ShapeError("a block structure needs at least one block")
        if any(a < 1 for a in self.alpha) or any(b < 1 for b in self.beta):
            raise ShapeError("every projective dimension must be >= 1")

    @cached_property
    def A(self) -> int:
        return len(self.alpha)

    @cached_property
    def B(self) -> int:
        return len(self.beta)

    @cached_property
    def q(self) -> int:
        return self.A + self.B

    @cached_property
    def dims(self) -> tuple:
        """Projective dimension of every block, in block order."""
        return self.alpha + self.beta

    @cached_property
    def N(self) -> int:
        return sum(self.alpha) + sum(self.beta)

    @cached_property
    def labels(self) -> tuple:
        return tuple(f"X{i + 1}" for i in range(self.A)) + tuple(
            f"Y{j + 1}" for j in range(self.B)
        )

    def check_degree(self, d: Sequence[int]) -> tuple:
        d = tuple(int(x) for x in d)
        if len(d) != self.q:
            raise ShapeError(f"multidegree {d} has {len(d)} entries, expected {self.q}")
        return d


@lru_cache(maxsize=None)
def block_monomials(n: int, d: int) -> tuple:
    """Exponents of degree ``d`` in ``n + 1`` variables, lex order with x_0 leading.

    >>> block_monomials(1, 2)
    ((2, 0), (1, 1), (0, 2))
    """
    if d < 0:
        return ()
    if n == 0:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in block_monomials(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomial_basis(structure: BlockStructure, d: Sequence[int]) -> list:
    """All exponent vectors of multidegree ``d`` in canonical order.

    Blocks are taken in order (first block most significant); inside a block
    the order is :func:`block_monomials`.  Empty when some entry is negative.
    """
    d = structure.check_degree(d)
    per_block = [block_monomials(n, di) for n, di in zip(structure.dims, d)]
    return list(product(*per_block))


def basis_size(structure: BlockStructure, d: Sequence[int]) -> int:
    d = structure.check_degree(d)
    if any(x < 0 for x in d):
        return 0
    return prod(comb(di + n, n) for n, di in zip(structure.dims, d))


def multidegree_of(exponent: ExponentVector) -> tuple:
    return tuple(sum(block) for block in exponent)


def mhb(structure: BlockStructure, degrees: Sequence[Sequence[int]]) -> int:
    """Multihomogeneous Bezout bound of a square system.

    Coefficient of ``prod Z_i^{n_i}`` in ``prod_k sum_i d_{k,i} Z_i``.  The
    product is expanded factor by factor, discarding every monomial that
    already exceeds the target exponent in some variable.
    """
    if len(degrees) != structure.N:
        raise ArityError(f"mhb needs {structure.N} multidegrees, got {len(degrees)}")
    checked = []
    for d in degrees:
        d = structure.check_degree(d)
        if any(x < 0 for x in d):
            raise ShapeError("mhb needs nonnegative multidegrees")
        checked.append(d)
    # the bound is symmetric in the degrees, so a sorted key caches well
    return _mhb(structure.dims, tuple(sorted(checked)))


@lru_cache(maxsize=4096)
def _mhb(target: tuple, degrees: tuple) -> int:
    current = {(0,) * len(target): 1}
    for d in degrees:
        nxt = defaultdict(int)
        for expo, coeff in current.items():
            for i, di in enumerate(d):
                if di and expo[i] < target[i]:
                    bumped = expo[:i] + (expo[i] + 1,) + expo[i + 1 :]
                    nxt[bumped] += coeff * di
        current = nxt
        if not current:
            return 0
    return current.get(target, 0)


def resultant_degree(structure: BlockStructure, degrees: Sequence[Sequence[int]]):
    """Total degree of the resultant and its degree in each polynomial's coefficients.

    Returns ``(total, per_poly)`` where ``per_poly[k]`` is the Bezout bound of
    the square system obtained by dropping polynomial ``k``.
    """
    if len(degrees) != structure.N + 1:
        raise ArityError(
            f"the resultant needs {structure.N + 1} multidegrees, got {len(degrees)}"
        )
    per_poly = tuple(
        mhb(structure, [d for i, d in enumerate(degrees) if i != k])
        for k in range(len(degrees))
    )
    return sum(per_poly), per_poly


@dataclass(frozen=True)
class Polynomial:
    """A multihomogeneous polynomial.

    ``coefficients`` maps exponent vectors to scalars; absent keys are zero.
    ``None`` means generic (symbolic) coefficients ``u_{k, alpha}``.
    """

    multidegree: tuple
    coefficients: Optional[Mapping] = field(default=None, hash=False)

    def coefficient(self, exponent) -> object:
        if self.coefficients is None:
            raise ModeError("polynomial has symbolic coefficients")
        return self.coefficients.get(exponent, 0)

    def evaluate(self, point: Sequence[Sequence]) -> object:
        """Value at a point given as one coordinate tuple per block."""
        if self.coefficients is None:
            raise ModeError("cannot evaluate a symbolic polynomial")
        total = 0
        for expo, c in self.coefficients.items():
            term = c
            for block, coords in zip(expo, point):
                for e, x in zip(block, coords):
                    if e:
                        term = term * x**e
            total = total + term
        return total


@dataclass(frozen=True)
class PolySystem:
    """A list of multihomogeneous polynomials over a fixed block structure."""

    structure: BlockStructure
    polys: tuple
    arithmetic: str = "symbolic"

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if self.arithmetic not in ARITHMETIC_MODES:
            raise ModeError(f"unknown arithmetic mode {self.arithmetic!r}")
        for p in self.polys:
            d = self.structure.check_degree(p.multidegree)
            if any(x < 0 for x in d):
                raise ShapeError("polynomial multidegrees must be nonnegative")
            if p.coefficients is not None:
                for key in p.coefficients:
                    if len(key) != self.structure.q or multidegree_of(key) != d:
                        raise ShapeError(f"exponent {key} does not have multidegree {d}")
                    for n, block in zip(self.structure.dims, key):
                        if len(block) != n + 1 or any(e < 0 for e in block):
                            raise ShapeError(f"malformed exponent {key}")
        symbolic = [p.coefficients is None for p in self.polys]
        if self.arithmetic == "symbolic" and not all(symbolic):
            raise ModeError("a symbolic system cannot carry coefficients")
        if self.arithmetic != "symbolic" and any(symbolic):
            raise ModeError(f"a {self.arithmetic} system needs coefficients for every polynomial")

    @property
    def degrees(self) -> list:
        return [p.multidegree for p in self.polys]

    @property
    def is_numeric(self) -> bool:
        return self.arithmetic != "symbolic"

    def symbolic(self) -> "PolySystem":
        """Same multidegrees, generic coefficients."""
        return PolySystem(
            self.structure, tuple(Polynomial(p.multidegree) for p in self.polys), "symbolic"
        )

    def scaled(self, k: int, factor) -> "PolySystem":
        """Copy with every coefficient of polynomial ``k`` multiplied by ``factor``."""
        polys = list(self.polys)
        p = polys[k]
        polys[k] = Polynomial(
            p.multidegree, {e: factor * c for e, c in p.coefficients.items()}
        )
        return PolySystem(self.structure, tuple(polys), self.arithmetic)


def _scalar_kind(value) -> str:
    if isinstance(value, (int, Fraction)):
        return "rational"
    return "float64"


def make_system(structure: BlockStructure, polys: Sequence) -> PolySystem:
    """Build a system from ``(multidegree, coefficients-or-None)`` pairs.

    The arithmetic mode is inferred: all-``None`` gives a symbolic system,
    ``int``/``Fraction`` scalars a rational one, anything else float64.
    """
    built = []
    kinds = set()
    for deg, coeffs in polys:
        deg = structure.check_degree(deg)
        if coeffs is not None:
            coeffs = {tuple(tuple(b) for b in k): v for k, v in coeffs.items()}
            kinds.update(_scalar_kind(v) for v in coeffs.values())
            if not coeffs:
                kinds.add("rational")
        built.append(Polynomial(deg, coeffs))
    if all(p.coefficients is None for p in built):
        mode = "symbolic"
    elif "float64" in kinds:
        mode = "float64"
    else:
        mode = "rational"
    if mode == "rational":
        built = [
            Polynomial(p.multidegree, {k: Fraction(v) for k, v in p.coefficients.items()})
            if p.coefficients is not None
            else p
            for p in built
        ]
    return PolySystem(structure, tuple(built), mode)


_KEY_BLOCK = re.compile(r"^\s*([XY])(\d+)\s*:\s*\[([^\]]*)\]\s*$")


def format_monomial_key(structure: BlockStructure, exponent: ExponentVector) -> str:
    """Canonical text key, e.g. ``"X1:[1,0];Y1:[0,1]"``."""
    return ";".join(
        f"{label}:[{','.join(str(e) for e in block)}]"
        for label, block in zip(structure.labels, exponent)
    )


def parse_monomial_key(structure: BlockStructure, key: str) -> ExponentVector:
    parts = [p for p in key.split(";") if p.strip()]
    labels = structure.labels
    if len(parts) != len(labels):
        raise ShapeError(f"monomial key {key!r} does not list all {len(labels)} blocks")
    out = []
    for part, label, n in zip(parts, labels, structure.dims):
        match = _KEY_BLOCK.match(part)
        if not match or f"{match.group(1)}{match.group(2)}" != label:
            raise ShapeError(f"malformed block {part!r} in monomial key {key!r}")
        raw = match.group(3).strip()
        exps = tuple(int(e) for e in raw.split(",")) if raw else ()
        if len(exps) != n + 1 or any(e < 0 for e in exps):
            raise ShapeError(f"block {label} of {key!r} needs {n + 1} nonnegative exponents")
        out.append(exps)
    return tuple(out)
