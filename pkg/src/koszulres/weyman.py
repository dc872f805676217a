"""Terms of the Weyman complex K_{v,p}(m) via the Bott rule and Kunneth.

For a subset ``I`` of ``{0..N}`` the twist is ``m - sum_{k in I} d_k``; each
block contributes cohomology in at most one degree ``r``, so every
``(I, r)`` pair lands in exactly one ``(v, p) = (|I| - sum r, |I|)``.
Subsets are enumerated through groups of polynomials with equal multidegree,
which keeps the count polynomial for structured systems.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb, prod
from typing import Optional, Sequence

import numpy as np

from .blocks import BlockStructure, PolySystem
from .errors import ShapeError

PRIMAL = "primal"
DUAL = "dual"

EXPLICIT_LIMIT = 20


@lru_cache(maxsize=None)
def bott_factor(n: int, a: int) -> Optional[tuple]:
    """Cohomology of O(a) on P^n as ``(r, dim, kind)``, or ``None`` if it all vanishes."""
    if n < 1:
        raise ShapeError("projective dimension must be >= 1")
    if a >= 0:
        return 0, comb(a + n, n), PRIMAL
    if a <= -n - 1:
        return n, comb(-a - 1, n), DUAL
    return None


@dataclass(frozen=True)
class CohomologyFactor:
    block: int
    n: int
    twist: int
    r: int
    dim: int
    kind: str

    @property
    def degree(self) -> int:
        """Degree of the (dual) monomials spanning this factor."""
        if self.kind == PRIMAL:
            return self.twist
        return -(self.twist + self.n + 1)


def cohomology_factors(structure: BlockStructure, twist: Sequence[int]) -> Optional[tuple]:
    out = []
    for i, (n, a) in enumerate(zip(structure.dims, twist)):
        f = bott_factor(n, a)
        if f is None:
            return None
        out.append(CohomologyFactor(i, n, a, *f))
    return tuple(out)


@dataclass(frozen=True)
class Group:
    """Polynomial indices sharing one multidegree."""

    indices: tuple
    degree: tuple


def group_indices(degrees: Sequence[Sequence[int]], explicit: bool = False) -> tuple:
    """Index 0 alone, then indices ``1..N`` grouped by equal multidegree.

    With ``explicit`` every index becomes its own group, which turns the
    grouped enumeration into plain subset enumeration.
    """
    degrees = [tuple(d) for d in degrees]
    if explicit:
        return tuple(Group((k,), d) for k, d in enumerate(degrees))
    groups = [Group((0,), degrees[0])]
    seen = {}
    for k, d in enumerate(degrees[1:], start=1):
        seen.setdefault(d, []).append(k)
    for d, idx in seen.items():
        groups.append(Group(tuple(idx), d))
    return tuple(groups)


@dataclass(frozen=True)
class WeymanSummand:
    """One nonzero piece of K_{v,p}: a tensor of block cohomologies and wedges.

    ``counts[g]`` is how many indices of ``groups[g]`` the wedge sets take.
    """

    v: int
    p: int
    factors: tuple
    groups: tuple
    counts: tuple

    @property
    def twist(self) -> tuple:
        return tuple(f.twist for f in self.factors)

    @property
    def multiplicity(self) -> int:
        return prod(comb(len(g.indices), s) for g, s in zip(self.groups, self.counts))

    @property
    def dim(self) -> int:
        return prod(f.dim for f in self.factors) * self.multiplicity

    def subsets(self) -> list:
        """Every wedge set of the summand, sorted lexicographically."""
        choices = [combinations(g.indices, s) for g, s in zip(self.groups, self.counts)]
        return sorted(tuple(sorted(sum(pick, ()))) for pick in product(*choices))


@dataclass(frozen=True)
class WeymanComplexDescriptor:
    structure: BlockStructure
    degrees: tuple
    m: tuple
    terms: dict = field(default_factory=dict)

    def rank(self, v: int) -> int:
        return sum(s.dim for s in self.terms.get(v, ()))

    def ranks(self) -> dict:
        return {v: self.rank(v) for v in sorted(self.terms)}

    def summands(self, v: int) -> list:
        return list(self.terms.get(v, ()))


def _wants_grouping(system: PolySystem) -> bool:
    from .formulas import classify

    return classify(system.structure, system.degrees)[0] != "generic"


def complex_terms(system: PolySystem, m: Sequence[int], mode: str = "auto") -> WeymanComplexDescriptor:
    """Nonzero summands of every K_v(m).

    ``mode`` is ``"grouped"``, ``"explicit"`` or ``"auto"``; auto groups
    when the square part is a recognised star or bipartite system and falls
    back to subset enumeration otherwise.
    """
    structure = system.structure
    m = structure.check_degree(m)
    degrees = tuple(tuple(d) for d in system.degrees)
    if mode not in ("auto", "grouped", "explicit"):
        raise ValueError(f"unknown enumeration mode {mode!r}")
    explicit = mode == "explicit" or (mode == "auto" and not _wants_grouping(system))
    if explicit and len(degrees) > EXPLICIT_LIMIT + 1:
        raise ShapeError(
            f"subset enumeration is limited to N <= {EXPLICIT_LIMIT}; "
            "use a star or bipartite system"
        )
    groups = group_indices(degrees, explicit)
    terms = defaultdict(list)
    ranges = [range(len(g.indices) + 1) for g in groups]
    for counts in product(*ranges):
        twist = list(m)
        for g, s in zip(groups, counts):
            if s:
                for i, di in enumerate(g.degree):
                    twist[i] -= s * di
        factors = cohomology_factors(structure, twist)
        if factors is None:
            continue
        p = sum(counts)
        v = p - sum(f.r for f in factors)
        terms[v].append(WeymanSummand(v, p, factors, groups, counts))
    return WeymanComplexDescriptor(structure, degrees, m, dict(sorted(terms.items())))


def is_determinantal(desc: WeymanComplexDescriptor) -> bool:
    """Only K_1 and K_0 nonzero, of equal rank, each concentrated in one p."""
    present = {v for v, items in desc.terms.items() if any(s.dim for s in items)}
    if present != {0, 1}:
        return False
    if desc.rank(0) != desc.rank(1):
        return False
    return all(len({s.p for s in desc.terms[v]}) == 1 for v in (0, 1))


def dual_degree_vector(m: Sequence[int], degrees: Sequence[Sequence[int]], structure: BlockStructure) -> tuple:
    m = structure.check_degree(m)
    total = [0] * structure.q
    for d in degrees:
        d = structure.check_degree(d)
        total = [t + x for t, x in zip(total, d)]
    return tuple(t - (n + 1) - mi for t, n, mi in zip(total, structure.dims, m))


# Vectorised rank tables, used for large parameter sweeps.

@lru_cache(maxsize=None)
def _bott_tables(n: int, lo: int, hi: int):
    a = np.arange(lo, hi + 1)
    dims = np.zeros(a.shape, dtype=np.int64)
    r = np.full(a.shape, -1, dtype=np.int64)
    for idx, t in enumerate(a.tolist()):
        f = bott_factor(n, t)
        if f is not None:
            r[idx], dims[idx] = f[0], f[1]
    return dims, r


def rank_tables(structure: BlockStructure, degrees: Sequence[Sequence[int]], ms: Sequence[Sequence[int]]) -> list:
    """For each degree vector in ``ms``, a dict ``{(v, p): rank}`` of nonzero pieces.

    Same numbers as :func:`complex_terms` in grouped mode, computed for many
    degree vectors at once with numpy.
    """
    groups = group_indices(degrees)
    counts = np.array(list(product(*[range(len(g.indices) + 1) for g in groups])), dtype=np.int64)
    gdeg = np.array([g.degree for g in groups], dtype=np.int64)
    mult = np.ones(len(counts), dtype=np.int64)
    for col, g in enumerate(groups):
        mult *= np.array([comb(len(g.indices), s) for s in counts[:, col]], dtype=np.int64)
    shift = counts @ gdeg
    p = counts.sum(axis=1)
    ms = np.array(ms, dtype=np.int64).reshape(-1, structure.q)
    twists = ms[:, None, :] - shift[None, :, :]
    dim = np.broadcast_to(mult, twists.shape[:2]).copy()
    rsum = np.zeros(twists.shape[:2], dtype=np.int64)
    for b, n in enumerate(structure.dims):
        t = twists[:, :, b]
        lo, hi = int(t.min()), int(t.max())
        dt, rt = _bott_tables(n, lo, hi)
        dim *= dt[t - lo]
        rsum += np.where(rt[t - lo] < 0, 0, rt[t - lo])
    v = p[None, :] - rsum
    # aggregate dims by (v, p) for all rows at once
    pmax = int(p.max()) + 1
    vmin = int(v.min())
    key = (v - vmin) * pmax + p[None, :]
    width = int(key.max()) + 1
    sums = np.zeros((len(ms), width), dtype=np.int64)
    np.add.at(sums, (np.arange(len(ms))[:, None], key), dim)
    out = []
    for row in sums:
        nz = np.nonzero(row)[0]
        out.append({(int(k) // pmax + vmin, int(k) % pmax): int(row[k]) for k in nz})
    return out


def table_is_determinantal(table: dict) -> bool:
    """:func:`is_determinantal` for a table produced by :func:`rank_tables`."""
    vs = {v for v, _ in table}
    if vs != {0, 1}:
        return False
    ps = {v: {p for vv, p in table if vv == v} for v in (0, 1)}
    if any(len(s) != 1 for s in ps.values()):
        return False
    return sum(d for (v, _), d in table.items() if v == 0) == sum(
        d for (v, _), d in table.items() if v == 1
    )
