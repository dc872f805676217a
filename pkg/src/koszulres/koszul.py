"""Explicit bases of K_1, K_0 and the matrix of the Koszul map delta_1.

Rows index K_0 and columns index K_1.  Every entry is a signed reference to a
single input coefficient ``c_{k, gamma}``; all signs come from the inner
derivative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

import numpy as np

from .blocks import (
    BlockStructure,
    PolySystem,
    block_monomials,
    format_monomial_key,
    monomial_basis,
)
from .errors import DeterminantalityError, ModeError
from .weyman import (
    DUAL,
    PRIMAL,
    WeymanSummand,
    cohomology_factors,
    complex_terms,
    is_determinantal,
)


@dataclass(frozen=True)
class BasisElement:
    """Tensor of one (dual) monomial per block with a wedge ``e_I``.

    ``parts[b]`` is ``(kind, exponent)``; a dual part with exponent ``g``
    stands for the dual monomial of ``x^g``.
    """

    parts: tuple
    wedge: tuple

    def label(self, structure: BlockStructure) -> str:
        blocks = []
        for name, (kind, expo) in zip(structure.labels, self.parts):
            mark = "d" if kind == DUAL else ""
            blocks.append(f"{name}:{mark}[{','.join(map(str, expo))}]")
        return ";".join(blocks) + "|e:" + ",".join(map(str, self.wedge))


def enumerate_basis(summand: WeymanSummand) -> list:
    """Basis of a summand: wedge sets in lexicographic order, then monomials."""
    per_block = [
        [(f.kind, e) for e in block_monomials(f.n, f.degree)] for f in summand.factors
    ]
    monos = list(product(*per_block))
    return [BasisElement(parts, wedge) for wedge in summand.subsets() for parts in monos]


def inner_derivative(k: int, wedge: Sequence[int]) -> Optional[tuple]:
    """Contract ``e_k`` out of ``e_I``; ``None`` when ``k`` is not in ``I``.

    Position ``t`` (1-based) of ``k`` in ``I`` gives the sign ``(-1)^(t+1)``.
    """
    wedge = tuple(wedge)
    if k not in wedge:
        return None
    t = wedge.index(k)
    return wedge[:t] + wedge[t + 1 :], -1 if t % 2 else 1


def _shift_part(kind: str, expo: tuple, gamma: tuple) -> Optional[tuple]:
    if kind == PRIMAL:
        return tuple(a + b for a, b in zip(expo, gamma))
    out = tuple(a - b for a, b in zip(expo, gamma))
    if any(x < 0 for x in out):
        return None
    return out


def mu_terms(structure: BlockStructure, degree: Sequence[int], parts: tuple) -> list:
    """Action of every monomial ``x^gamma`` of multidegree ``degree`` on ``parts``.

    Returns ``(gamma, new_parts)`` pairs; monomials that annihilate a dual
    part are left out.
    """
    out = []
    for gamma in monomial_basis(structure, degree):
        new = []
        for (kind, expo), g in zip(parts, gamma):
            shifted = _shift_part(kind, expo, g)
            if shifted is None:
                break
            new.append((kind, shifted))
        else:
            out.append((gamma, tuple(new)))
    return out


def mu_apply(structure: BlockStructure, poly, parts: tuple) -> dict:
    """Multiply a numeric polynomial into ``parts``: ``{new_parts: coefficient}``."""
    if poly.coefficients is None:
        raise ModeError("mu_apply needs numeric coefficients; use mu_terms for symbols")
    out = {}
    for gamma, new in mu_terms(structure, poly.multidegree, parts):
        c = poly.coefficients.get(gamma, 0)
        if c:
            out[new] = out.get(new, 0) + c
    return out


@dataclass
class KoszulMatrix:
    structure: BlockStructure
    degrees: tuple
    m: tuple
    row_basis: list
    col_basis: list
    entries: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple:
        return len(self.row_basis), len(self.col_basis)

    def nnz(self) -> int:
        return len(self.entries)

    def evaluate(self, coeff: Callable) -> dict:
        """Sparse values ``{(row, col): sum sign * coeff(k, gamma)}``."""
        out = {}
        for pos, terms in self.entries.items():
            total = 0
            for k, gamma, sign in terms:
                total = total + sign * coeff(k, gamma)
            out[pos] = total
        return out

    def _coefficient_lookup(self, system: PolySystem) -> Callable:
        if not system.is_numeric:
            raise ModeError("a numeric matrix needs a system with coefficients")
        if tuple(tuple(d) for d in system.degrees) != self.degrees:
            raise ModeError("system multidegrees do not match the matrix")
        return lambda k, gamma: system.polys[k].coefficients.get(gamma, 0)

    def to_fractions(self, system: PolySystem) -> list:
        """Dense list-of-lists of ``Fraction`` (rational systems)."""
        if system.arithmetic != "rational":
            raise ModeError("exact instantiation needs a rational system")
        rows, cols = self.shape
        dense = [[Fraction(0)] * cols for _ in range(rows)]
        for (i, j), value in self.evaluate(self._coefficient_lookup(system)).items():
            dense[i][j] = Fraction(value)
        return dense

    def to_array(self, system: PolySystem) -> np.ndarray:
        """Dense float (or complex) array."""
        values = self.evaluate(self._coefficient_lookup(system))
        dtype = complex if any(isinstance(v, complex) for v in values.values()) else float
        out = np.zeros(self.shape, dtype=dtype)
        for (i, j), v in values.items():
            out[i, j] = v
        return out

    def to_json(self) -> dict:
        s = self.structure
        return {
            "m": list(self.m),
            "rows": [b.label(s) for b in self.row_basis],
            "cols": [b.label(s) for b in self.col_basis],
            "entries": [
                {
                    "row": i,
                    "col": j,
                    "terms": [
                        {"poly": k, "monomial": format_monomial_key(s, gamma), "sign": sign}
                        for k, gamma, sign in terms
                    ],
                }
                for (i, j), terms in sorted(self.entries.items())
            ],
        }

    def to_coo(self, system: PolySystem) -> str:
        """Coordinate text: a ``# rows cols nnz`` header, then 1-indexed ``row col value`` lines."""
        values = self.evaluate(self._coefficient_lookup(system))
        values = {pos: v for pos, v in values.items() if v != 0}
        lines = [f"# {self.shape[0]} {self.shape[1]} {len(values)}"]
        for (i, j), v in sorted(values.items()):
            lines.append(f"{i + 1} {j + 1} {_format_scalar(v)}")
        return "\n".join(lines) + "\n"


def _format_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def assemble_delta1(system: PolySystem, m: Sequence[int], desc=None) -> KoszulMatrix:
    """Matrix of delta_1(m) for a determinantal degree vector ``m``."""
    structure = system.structure
    m = structure.check_degree(m)
    if desc is None:
        desc = complex_terms(system, m)
    if not is_determinantal(desc):
        raise DeterminantalityError(f"the Weyman complex for m = {list(m)} is not determinantal: ranks {desc.ranks()}")
    degrees = tuple(tuple(d) for d in system.degrees)
    rows = [b for s in desc.summands(0) for b in enumerate_basis(s)]
    cols = [b for s in desc.summands(1) for b in enumerate_basis(s)]
    row_index = {(b.parts, b.wedge): i for i, b in enumerate(rows)}
    col_summand = [s for s in desc.summands(1) for _ in range(s.dim)]

    entries = {}
    cache = {}
    for j, (b, summand) in enumerate(zip(cols, col_summand)):
        for k in b.wedge:
            wedge, sign = inner_derivative(k, b.wedge)
            target = tuple(t + d for t, d in zip(summand.twist, degrees[k]))
            if target not in cache:
                cache[target] = cohomology_factors(structure, target)
            factors = cache[target]
            # mu preserves the cohomological degree of every block
            if factors is None or any(
                f.kind != kind for f, (kind, _) in zip(factors, b.parts)
            ):
                continue
            for gamma, parts in mu_terms(structure, degrees[k], b.parts):
                i = row_index[(parts, wedge)]
                entries.setdefault((i, j), []).append((k, gamma, sign))
    return KoszulMatrix(structure, degrees, m, rows, cols, entries)
