"""
Command-line front end.

Every subcommand computes a JSON-serializable payload.  ``--json`` prints it
as compact sorted JSON; otherwise the same payload is printed as a two-column
table.  Exit codes: 0 success, 1 usage or input error, 2 validation failure,
3 guard overflow.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .centerkit import (BasicElement, CenterError, ReductionOverflow, base_pool,
                        basic_trace, central_reduce, random_central_element, rank_audit)
from .diagram import (DIAGRAM_FIXTURES, DEFAULT_BUDGET, DiagramError, StateOverflow,
                      fixture_diagram, load_diagram, theta_cut, valuation)
from .lattice import (LatticeError, balanced_basis_cached, elementary_divisors,
                      pairing_kernel_mod_n, vector_to_dict)
from .qtorus import CyclotomicScalar, build_irrep, center_generators, torus_rank
from .qtrace import leading_term, trace_diagram
from .surface import FIXTURES, TriangulationError, fixture, load_triangulation

DEFAULT_SEED = 20240601

EXIT_OK, EXIT_INPUT, EXIT_VALIDATION, EXIT_OVERFLOW = 0, 1, 2, 3


class ValidationFailure(Exception):
    """A computed check came out negative."""


# ----------------------------------------------------------------------
# inputs

def resolve_surface(source):
    """
    A triangulation from a file path or a bundled fixture name.

    ``triangle`` and ``triangle.tri`` both name the bundled triangle when no
    such file exists.
    """
    if source is None:
        raise FileNotFoundError("--surface is required")
    path = Path(source)
    if path.is_file():
        return load_triangulation(path)
    name = path.name[:-4] if path.name.endswith(".tri") else path.name
    if name.lower().replace("-", "_") in FIXTURES + ("once_holed_torus",):
        return fixture(name)
    raise FileNotFoundError(f"no triangulation file or fixture named {source!r}")


def resolve_diagram(args):
    """The stated diagram of ``--diagram`` on the surface of ``--surface``."""
    source = args.diagram
    if source is None:
        raise FileNotFoundError("--diagram is required")
    path = Path(source)
    if path.is_file():
        return load_diagram(resolve_surface(args.surface), path)
    name = path.name[:-4] if path.name.endswith(".dia") else path.name
    if name in DIAGRAM_FIXTURES:
        return fixture_diagram(name)
    raise FileNotFoundError(f"no diagram file or fixture named {source!r}")


def resolve_indexing(t, text):
    if text is None:
        return None
    order = [e.strip() for e in text.split(",") if e.strip()]
    if sorted(order) != sorted(t.edges):
        raise ValidationFailure("--indexing must list every edge exactly once")
    return order


def require_n(args):
    if args.N is None:
        raise ValidationFailure("--N is required")
    if args.N < 3 or args.N % 2 == 0:
        raise ValidationFailure("--N must be an odd integer >= 3")
    return args.N


def surface_hash(t, d=None):
    text = t.serialize() + (d.serialize() if d is not None else "")
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# ----------------------------------------------------------------------
# commands; each returns (payload, surface, diagram)

def cmd_surface_check(args):
    t = resolve_surface(args.surface)
    out = t.summary()
    out.update({"edges": len(t.edges), "faces": t.num_faces,
                "dimensionExponent": t.dimension_exponent, "valid": True})
    return out, t, None


def cmd_lattice_info(args):
    t = resolve_surface(args.surface)
    B = balanced_basis_cached(t)
    out = {"rank": B.rank,
           "basis": [vector_to_dict(t, g) for g in B.generators],
           "gramDivisors": list(elementary_divisors([list(r) for r in B.gram]))}
    if args.N is not None:
        K = pairing_kernel_mod_n(B, require_n(args))
        out["kernelIndex"] = K.index_str
    return out, t, None


def cmd_torus_rank(args):
    t = resolve_surface(args.surface)
    return {"R": str(torus_rank(t, require_n(args)))}, t, None


def cmd_torus_irrep(args):
    t = resolve_surface(args.surface)
    N = require_n(args)
    _, _, central, _ = center_generators(t, N)
    rng = random.Random(args.seed)
    character = {g: complex(rng.uniform(0.5, 2.0)) for g in central}
    rep = build_irrep(t, N, character)
    out = {"dimension": rep.dimension,
           "relationResidual": rep.relation_residual(),
           "centerResidual": rep.center_residual(),
           "spanRank": rep.span_dimension()}
    if args.relation_tol is not None and out["relationResidual"] > args.relation_tol:
        raise ValidationFailure("relation residual above tolerance")
    return out, t, None


def cmd_trace(args):
    d = resolve_diagram(args)
    indexing = resolve_indexing(d.t, args.indexing)
    x = trace_diagram(d, args.N, args.budget)
    if args.leading_only:
        c, k = leading_term(x, indexing)
        return {"exponent": vector_to_dict(d.t, k), "coeff": c.to_json()}, d.t, d
    return {"terms": x.to_json()}, d.t, d


def cmd_valuation(args):
    d = resolve_diagram(args)
    return vector_to_dict(d.t, valuation(d)), d.t, d


def cmd_theta_cut(args):
    d = resolve_diagram(args)
    if args.edge is None:
        raise ValidationFailure("--edge is required")
    res = theta_cut(d, args.edge)
    out = {"edges": list(res.edges), "moves": res.moves, "exponent": res.exponent,
           "blocks": {e: list(b) for e, b in res.blocks.items()},
           "cut": res.cut.to_json(), "diagram": res.diagram.to_json()}
    return out, d.t, d


def cmd_center_certify(args):
    N = require_n(args)
    if args.diagram is not None:
        d = resolve_diagram(args)
        t = d.t
        indexing = resolve_indexing(t, args.indexing)
        x = basic_trace(BasicElement(CyclotomicScalar.one(N), d), N, args.budget)
        cert = central_reduce(x, N, indexing, budget=args.budget)
        if not cert.replay(x).is_zero():
            raise ValidationFailure("certificate does not replay to zero")
        return cert.to_json(), t, d
    t = resolve_surface(args.surface)
    indexing = resolve_indexing(t, args.indexing)
    rng = random.Random(args.seed)
    pool = base_pool(t, 2)
    elements = [random_central_element(t, N, rng, pool) for _ in range(args.samples)]

    def certify(x):
        if x.is_zero():
            return 0
        cert = central_reduce(x, N, indexing, budget=args.budget)
        if not cert.replay(x).is_zero():
            raise ValidationFailure("certificate does not replay to zero")
        return cert.steps

    with ThreadPoolExecutor(max_workers=args.threads) as pool_exec:
        steps = list(pool_exec.map(certify, elements))
    return {"samples": len(steps), "residualZero": True, "steps": steps,
            "maxSteps": max(steps, default=0)}, t, None


def cmd_rank_audit(args):
    t = resolve_surface(args.surface)
    audit = rank_audit(t, require_n(args), args.budget)
    out = audit.to_json()
    if audit.verdict != "PASS":
        print(json.dumps(out, sort_keys=True), file=sys.stderr)
        raise ValidationFailure("rank audit failed")
    return out, t, None


def cmd_selftest(args):
    import pytest
    root = Path(__file__).resolve().parents[2] / "tests"
    target = root / "test_acceptance.py" if args.level == "quick" else root
    if not target.exists():
        raise FileNotFoundError(f"test suite not found at {target}")
    code = pytest.main([str(target), "-q", "-s", "-p", "no:cacheprovider"])
    if code != 0:
        raise ValidationFailure(f"selftest failed with pytest exit code {int(code)}")
    return {"level": args.level, "passed": True}, None, None


COMMANDS = {
    ("surface", "check"): cmd_surface_check,
    ("lattice", "info"): cmd_lattice_info,
    ("torus", "rank"): cmd_torus_rank,
    ("torus", "irrep"): cmd_torus_irrep,
    ("trace",): cmd_trace,
    ("valuation",): cmd_valuation,
    ("theta-cut",): cmd_theta_cut,
    ("center", "certify"): cmd_center_certify,
    ("rank", "audit"): cmd_rank_audit,
    ("selftest",): cmd_selftest,
}


# ----------------------------------------------------------------------
# parsing and output

def _common(p):
    p.add_argument("--surface", help="triangulation file or bundled fixture name")
    p.add_argument("--diagram", help="stated diagram file or bundled diagram name")
    p.add_argument("--N", type=int, help="odd order of the root of unity")
    p.add_argument("--indexing", help="comma-separated edge ids for the lexicographic order")
    p.add_argument("--json", action="store_true", help="print compact JSON")
    p.add_argument("--report", action="store_true",
                   help="wrap the payload with command, fixture hash and N")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="state enumeration and class budget")


def build_parser():
    parser = argparse.ArgumentParser(prog="skeintorus",
                                     description="Quantum traces and centers of skein algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    groups = {}
    for key in COMMANDS:
        if len(key) == 1:
            p = sub.add_parser(key[0])
        else:
            if key[0] not in groups:
                g = sub.add_parser(key[0])
                groups[key[0]] = g.add_subparsers(dest="action", required=True)
            p = groups[key[0]].add_parser(key[1])
        _common(p)
        p.set_defaults(key=key)
        if key == ("trace",):
            p.add_argument("--leading-only", action="store_true", help="print only the leading term")
        if key == ("theta-cut",):
            p.add_argument("--edge", help="interior edge to cut along")
        if key == ("torus", "irrep"):
            p.add_argument("--relation-tol", type=float, default=1e-9)
        if key == ("center", "certify"):
            p.add_argument("--samples", type=int, default=10,
                           help="random central elements when no diagram is given")
        if key == ("selftest",):
            p.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


def _flatten(prefix, value, rows):
    if isinstance(value, dict) and value:
        for k in sorted(value, key=str):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    else:
        rows.append((prefix, json.dumps(value, sort_keys=True, separators=(",", ":"))))


def render(payload, as_json):
    """The payload as compact JSON or as a key/value table."""
    if as_json:
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))
    rows = []
    _flatten("", payload, rows)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        payload, t, d = COMMANDS[args.key](args)
    except (ValidationFailure, TriangulationError, DiagramError, LatticeError,
            CenterError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (StateOverflow, ReductionOverflow) as exc:
        print(f"guard overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.report:
        payload = {"command": " ".join(args.key), "N": args.N,
                   "fixtureHash": surface_hash(t, d) if t is not None else None,
                   "seed": args.seed, "results": payload}
        if args.timing:
            payload["timing"] = round(time.perf_counter() - start, 6)
    print(render(payload, args.json))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
