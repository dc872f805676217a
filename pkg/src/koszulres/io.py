"""JSON documents for polynomial systems and MEP instances.

Rationals are written as ``"p/q"`` strings (plain ``"p"`` for integers) and
floats as JSON numbers, so exact data survives a round trip.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .blocks import BlockStructure, PolySystem, format_monomial_key, make_system, parse_monomial_key
from .errors import ModeError, ShapeError
from .solver import MEPInstance


class DocumentError(ShapeError):
    """A document is malformed."""


def scalar_to_json(x) -> Any:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool):
        raise DocumentError("booleans are not scalars")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, complex):
        raise DocumentError("complex scalars are not supported in documents")
    return float(x)


def scalar_from_json(x, exact: bool = True):
    if isinstance(x, str):
        try:
            value = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"bad rational {x!r}") from exc
        return value if exact else float(value)
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"bad scalar {x!r}")
    if isinstance(x, int):
        return Fraction(x) if exact else float(x)
    if exact:
        raise DocumentError(f"float {x!r} in a rational document")
    return float(x)


def system_to_document(system: PolySystem) -> dict:
    s = system.structure
    polys = []
    for p in system.polys:
        entry = {"multidegree": {"X": list(p.multidegree[: s.A]), "Y": list(p.multidegree[s.A :])}}
        if p.coefficients is not None:
            entry["coefficients"] = {
                format_monomial_key(s, k): scalar_to_json(v)
                for k, v in sorted(p.coefficients.items())
            }
        polys.append(entry)
    return {
        "blocks": {"alpha": list(s.alpha), "beta": list(s.beta)},
        "arithmetic": system.arithmetic,
        "polynomials": polys,
    }


def system_from_document(doc: dict) -> PolySystem:
    try:
        blocks = doc["blocks"]
        s = BlockStructure(tuple(blocks.get("alpha", ())), tuple(blocks.get("beta", ())))
        arithmetic = doc.get("arithmetic", "rational")
        if arithmetic not in ("rational", "float64", "symbolic"):
            raise DocumentError(f"unknown arithmetic {arithmetic!r}")
        exact = arithmetic != "float64"
        polys = []
        for entry in doc["polynomials"]:
            md = entry["multidegree"]
            deg = tuple(md.get("X", ())) + tuple(md.get("Y", ()))
            if len(md.get("X", ())) != s.A or len(md.get("Y", ())) != s.B:
                raise DocumentError(f"multidegree {md} does not match the blocks")
            raw = entry.get("coefficients")
            if arithmetic == "symbolic":
                if raw is not None:
                    raise DocumentError("a symbolic document cannot list coefficients")
                polys.append((deg, None))
                continue
            if raw is None:
                raise DocumentError("numeric documents need coefficients for every polynomial")
            coeffs = {parse_monomial_key(s, k): scalar_from_json(v, exact) for k, v in raw.items()}
            polys.append((deg, coeffs))
    except DocumentError:
        raise
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise DocumentError(f"malformed system document: {exc}") from exc
    try:
        system = make_system(s, polys)
    except (ShapeError, ModeError) as exc:
        raise DocumentError(f"invalid system document: {exc}") from exc
    if arithmetic != "symbolic" and system.arithmetic != arithmetic:
        # an empty coefficient table carries no scalars to infer the mode from
        system = PolySystem(s, system.polys, arithmetic)
    return system


def mep_to_document(inst: MEPInstance, f0=None) -> dict:
    doc = {
        "alpha": inst.alpha,
        "beta": list(inst.betas),
        "matrices": {
            f"M_{t}_{j}": [[scalar_to_json(x) for x in row] for row in M]
            for (t, j), M in sorted(inst.matrices.items())
        },
    }
    if f0 is not None:
        doc["f0"] = [scalar_to_json(x) for x in f0]
    return doc


def mep_from_document(doc: dict):
    """Returns ``(instance, f0)``; ``f0`` is ``None`` when absent."""
    try:
        alpha = int(doc["alpha"])
        betas = tuple(int(b) for b in doc["beta"])
        exact = all(
            not isinstance(x, float)
            for M in doc["matrices"].values()
            for row in M
            for x in row
        )
        mats = {}
        for key, M in doc["matrices"].items():
            parts = key.split("_")
            if len(parts) != 3 or parts[0] != "M":
                raise DocumentError(f"bad matrix key {key!r}")
            mats[(int(parts[1]), int(parts[2]))] = [
                [scalar_from_json(x, exact) for x in row] for row in M
            ]
        f0 = doc.get("f0")
        if f0 is not None:
            f0 = [scalar_from_json(x, True) if not isinstance(x, float) else x for x in f0]
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise DocumentError(f"malformed MEP document: {exc}") from exc
    try:
        return MEPInstance(alpha, betas, mats), f0
    except ShapeError as exc:
        raise DocumentError(f"invalid MEP document: {exc}") from exc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
