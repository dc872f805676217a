"""Command line front end: ``koszulres <command> ...``.

Exit codes: 0 success, 2 bad input, 3 non-determinantal degree vector,
4 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Optional, Sequence

from . import formulas as fm
from .blocks import BlockStructure, make_system, mhb, resultant_degree
from .errors import (
    DegenerateEigenvectorError,
    DeterminantalityError,
    KoszulError,
    MultiplicityUnsupportedError,
    NotAffineError,
    SingularMEPError,
)
from .generate import random_mep, random_system, system_with_root
from .io import (
    DocumentError,
    dumps,
    mep_from_document,
    mep_to_document,
    system_from_document,
    system_to_document,
)
from .koszul import assemble_delta1
from .solver import solve_mep
from .weyman import complex_terms, is_determinantal

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DETERMINANTAL = 3
EXIT_SOLVER = 4

SOLVER_ERRORS = (
    SingularMEPError,
    MultiplicityUnsupportedError,
    NotAffineError,
    DegenerateEigenvectorError,
)


class InputError(Exception):
    pass


def _ints(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}") from exc


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _parse_case(text: str) -> fm.F0Case:
    """``center``, ``outer:j``, ``edge:j``, ``triangle:j1,j2``, ``x:i``, ``y:j``, ``xy:i,j``."""
    names = {
        "center": fm.CENTER,
        "outer": fm.OUTER,
        "edge": fm.EDGE,
        "triangle": fm.TRIANGLE,
        "x": fm.X_ONLY,
        "y": fm.Y_ONLY,
        "xy": fm.XY,
    }
    head, _, tail = text.partition(":")
    if head not in names:
        raise InputError(f"unknown f0 case {text!r}")
    return fm.F0Case(names[head], tuple(_ints(tail)))


def _parse_data(text: str, perm: Optional[str]) -> fm.DeterminantalData:
    parts = text.split("|")
    if len(parts) != 3:
        raise InputError("--data must look like 'P|D|c', e.g. '1|2|1'")
    P, D = _ints(parts[0]), _ints(parts[1])
    c = _ints(parts[2])
    if len(c) != 1:
        raise InputError("c must be a single integer")
    sigma = tuple(_ints(perm)) if perm else ()
    return fm.DeterminantalData(frozenset(P), frozenset(D), c[0], sigma)


def _square_degrees(system):
    s = system.structure
    degrees = system.degrees
    if len(degrees) == s.N + 1:
        return degrees[1:]
    if len(degrees) == s.N:
        return degrees
    raise InputError(f"expected {s.N} or {s.N + 1} polynomials, got {len(degrees)}")


def default_degree_vector(system) -> tuple:
    """A determinantal degree vector from the closed formulas, when the shape allows one."""
    s = system.structure
    kind, shape = fm.classify(s, system.degrees)
    d0 = system.degrees[0]
    if kind == "star" and fm.validate_star_d0(s, d0):
        data = fm.enumerate_determinantal_data(shape, d0)
        sylvester = fm.sylvester_data(s)
        chosen = sylvester if sylvester in data else data[0]
        return fm.star_degree_vector(shape, d0, chosen)[0]
    if kind == "bipartite" and fm.validate_bipartite_d0(s, d0):
        return fm.bipartite_degree_vector(shape, d0)
    raise InputError("no closed-form degree vector for this system; pass --m")


def cmd_mhb(args) -> int:
    system = system_from_document(_read_json(args.doc))
    print(mhb(system.structure, _square_degrees(system)))
    return EXIT_OK


def cmd_res_degree(args) -> int:
    system = system_from_document(_read_json(args.doc))
    total, per_poly = resultant_degree(system.structure, system.degrees)
    print(json.dumps({"total": total, "per_poly": list(per_poly)}))
    return EXIT_OK


def cmd_degree(args) -> int:
    system = system_from_document(_read_json(args.doc))
    s = system.structure
    kind, shape = fm.classify_square(s, _square_degrees(system))
    if kind == "generic":
        raise InputError("the square part is neither a star nor a bipartite system")
    if args.case:
        case = _parse_case(args.case)
        d0 = case.d0(s)
    elif len(system.degrees) == s.N + 1:
        d0 = tuple(system.degrees[0])
        case = fm.star_case_of(s, d0) if kind == "star" else None
    else:
        raise InputError("pass --case or include f0 in the document")
    degrees = [d0] + list(shape.square_degrees())
    out = {"shape": kind, "d0": list(d0)}
    if kind == "star":
        data = _parse_data(args.data, args.perm) if args.data else fm.sylvester_data(s)
        if args.perm and not args.data:
            data = fm.DeterminantalData(data.P, data.D, data.c, tuple(_ints(args.perm)))
        m, omega = fm.star_degree_vector(shape, d0, data)
        out.update(m=list(m), omega=omega)
    else:
        m = fm.bipartite_degree_vector(shape, d0)
        out.update(m=list(m))
    desc = complex_terms(make_system(s, [(d, None) for d in degrees]), m)
    sizes = {
        "rank_K1": desc.rank(1),
        "rank_K0": desc.rank(0),
        "resultant_degree": resultant_degree(s, degrees)[0],
        "determinantal": is_determinantal(desc),
    }
    if kind == "star" and case is not None:
        sizes["closed_form"] = fm.star_matrix_size(shape, case)
    out["sizes"] = sizes
    print(json.dumps(out))
    return EXIT_OK


def _m_arg(system, text: Optional[str]) -> tuple:
    return tuple(_ints(text)) if text else default_degree_vector(system)


def cmd_complex(args) -> int:
    system = system_from_document(_read_json(args.doc))
    m = _m_arg(system, args.m)
    desc = complex_terms(system.symbolic() if system.is_numeric else system, m, mode=args.mode)
    terms = {}
    for v, items in desc.terms.items():
        terms[str(v)] = [
            {
                "p": sm.p,
                "dim": sm.dim,
                "factors": [{"twist": f.twist, "r": f.r, "dim": f.dim, "kind": f.kind} for f in sm.factors],
                "wedge_counts": list(sm.counts),
                "wedge_groups": [list(g.indices) for g in sm.groups],
            }
            for sm in items
        ]
    out = {
        "m": list(m),
        "ranks": {str(v): r for v, r in desc.ranks().items()},
        "determinantal": is_determinantal(desc),
        "terms": terms,
    }
    print(json.dumps(out))
    return EXIT_OK


def cmd_matrix(args) -> int:
    system = system_from_document(_read_json(args.doc))
    m = _m_arg(system, args.m)
    K = assemble_delta1(system.symbolic() if system.is_numeric else system, m)
    if args.format == "coo":
        if not system.is_numeric:
            raise InputError("coordinate output needs a numeric document")
        text = K.to_coo(system)
    else:
        text = json.dumps(K.to_json(), indent=1) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _json_scalar(z, tol: float = 1e-12):
    z = complex(z)
    if abs(z.imag) <= tol * max(1.0, abs(z)):
        return z.real
    return {"re": z.real, "im": z.imag}


def cmd_solve_mep(args) -> int:
    inst, f0 = mep_from_document(_read_json(args.doc))
    if args.f0 and args.f0 != "auto":
        f0 = _ints(args.f0)
    elif args.f0 == "auto":
        f0 = None
    pairs = solve_mep(inst, f0, seed=_seed(args.seed), sep_tol=args.tol)
    out = [
        {
            "lambda": [_json_scalar(x) for x in p.lam],
            "vectors": [[_json_scalar(x) for x in v] for v in p.vectors],
            "residual": p.residual,
            "shift": _json_scalar(p.shift),
        }
        for p in pairs
    ]
    print(json.dumps(out, indent=1))
    return EXIT_OK


def _seed(cli_seed: Optional[int]) -> Optional[int]:
    env = os.environ.get("KOSZUL_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"KOSZUL_SEED must be an integer, got {env!r}") from exc
    return cli_seed


def cmd_random(args) -> int:
    seed = _seed(args.seed)
    rng = random.Random(seed if seed is not None else 0)
    if args.shape == "mep":
        betas = _ints(args.beta) if args.beta else [1]
        inst = random_mep(len(betas), betas, rng, bound=args.bound)
        sys.stdout.write(dumps(mep_to_document(inst)))
        return EXIT_OK
    alpha = tuple(_ints(args.alpha or "1"))
    beta = tuple(_ints(args.beta or "1"))
    s = BlockStructure(alpha, beta)
    if args.shape == "star":
        E = tuple(_ints(args.E)) if args.E else _default_star_E(s)
        shape = fm.StarShape(s, E)
        case = _parse_case(args.case or "center")
    else:
        if args.E:
            E = tuple(tuple(_ints(row)) for row in args.E.split(";"))
        else:
            raise InputError("--E is required for bipartite shapes, e.g. '1,2;1,2'")
        shape = fm.BipartiteShape(s, E)
        case = _parse_case(args.case or "xy:1,1")
    degrees = fm.degree_list(shape, case)
    if args.root:
        system, _ = system_with_root(s, degrees, rng, bound=args.bound)
    else:
        system = random_system(s, degrees, rng, bound=args.bound)
    sys.stdout.write(dumps(system_to_document(system)))
    return EXIT_OK


def _default_star_E(s: BlockStructure) -> tuple:
    """``E_j = beta_j`` with the surplus ``sum(alpha)`` added to the first block."""
    E = list(s.beta)
    E[0] += sum(s.alpha)
    return tuple(E)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="koszulres", description="Koszul-type resultant matrices and MEP solving.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mhb", help="multihomogeneous Bezout bound of the square part")
    p.add_argument("doc")
    p.set_defaults(func=cmd_mhb)

    p = sub.add_parser("res-degree", help="degree of the resultant, total and per polynomial")
    p.add_argument("doc")
    p.set_defaults(func=cmd_res_degree)

    p = sub.add_parser("degree", help="closed-form degree vector for a star or bipartite system")
    p.add_argument("doc")
    p.add_argument("--case", help="center | outer:j | edge:j | triangle:j1,j2 | x:i | y:j | xy:i,j")
    p.add_argument("--data", help="determinantal data 'P|D|c', e.g. '1|2|1'")
    p.add_argument("--perm", help="permutation sigma as '2,1'")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("complex", help="nonzero terms of the Weyman complex")
    p.add_argument("doc")
    p.add_argument("--m", help="degree vector, e.g. '2,-1'")
    p.add_argument("--mode", choices=("auto", "grouped", "explicit"), default="auto")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("matrix", help="Koszul matrix of delta_1")
    p.add_argument("doc")
    p.add_argument("--m", help="degree vector, e.g. '2,-1'")
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=("json", "coo"), default="json")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("solve-mep", help="solve a multiparameter eigenvalue problem")
    p.add_argument("doc")
    p.add_argument("--f0", help="'auto' or coefficients 'c0,c1,...'")
    p.add_argument("--tol", type=float, default=1e-6, help="relative eigenvalue separation")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_solve_mep)

    p = sub.add_parser("random", help="random system or MEP document")
    p.add_argument("--shape", choices=("star", "bipartite", "mep"), required=True)
    p.add_argument("--alpha", help="X block dimensions, e.g. '1,1'")
    p.add_argument("--beta", help="Y block dimensions (for mep: one per parameter)")
    p.add_argument("--E", help="star: '2,2'; bipartite: '1,2;1,2'")
    p.add_argument("--case", help="f0 case, as for the degree command")
    p.add_argument("--root", action="store_true", help="give all polynomials a common rational root")
    p.add_argument("--bound", type=int, default=9, help="coefficient bound")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DeterminantalityError as exc:
        print(f"DeterminantalityError: {exc}", file=sys.stderr)
        return EXIT_DETERMINANTAL
    except SOLVER_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (InputError, DocumentError, KoszulError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
