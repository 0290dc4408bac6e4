"""Command-line front end.

Exit codes: 0 success (verdicts such as NOT_EQUIVALENT live in the payload),
1 domain error, 2 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import io
from .classify import classify, dual_system
from .errors import MultifoliateError, SchemaError
from .linalg import format_rational
from .projsys import completion, is_complete, product_system
from .selftest import FAULTS, run_selftest
from .structures import equivalent, product_structure
from .weil.fiber import base_is_surjective, fiber_product, weil_apply

DEFAULT_MAX_POSET = 20


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc


def detect_kind(data) -> str:
    if not isinstance(data, dict):
        raise SchemaError("top-level JSON value must be an object")
    for key, kind in (
        ("algebras", "weil-system"),
        ("table", "weil-algebra"),
        ("truncated", "weil-algebra"),
        ("p", "structure"),
        ("dims", "system"),
        ("elements", "poset"),
    ):
        if key in data:
            return kind
    raise SchemaError("cannot tell what kind of object this is")


def _summary(kind: str, data, max_poset: int) -> dict:
    if kind == "poset":
        p = io.poset_from_json(data, max_poset)
        return {"valid": True, "kind": kind, "poset": p.to_json(), "floors": p.floors(), "greatest": p.greatest()}
    if kind == "system":
        s = io.system_from_json(data, max_poset)
        return {"valid": True, "kind": kind, "limit_dim": s.limit_dim, "complete": is_complete(s), "system": io.system_to_json(s)}
    if kind == "structure":
        s = io.structure_from_json(data, max_poset)
        return {"valid": True, "kind": kind, "fibers": s.fiber_sizes(), "pattern": s.pattern.tolist()}
    if kind == "weil-algebra":
        a = io.algebra_from_json(data)
        return {"valid": True, "kind": kind, "dim": a.dim, "nilpotency_order": a.nilpotency_order()}
    mu = io.weil_system_from_json(data, max_poset)
    return {"valid": True, "kind": kind, "dims": {x: mu.algebras[x].dim for x in mu.poset}}


def cmd_validate(args) -> dict:
    data = _load(args.input)
    kind = args.kind if args.kind != "auto" else detect_kind(data)
    return _summary(kind, data, args.max_poset)


def cmd_complete(args) -> dict:
    system = io.system_from_json(_load(args.input), args.max_poset)
    comp = completion(system)
    return {
        "system": io.system_to_json(comp.system),
        "index_map": comp.index_map,
        "antichains": {x: list(comp.antichain[x]) for x in comp.system.poset},
        "was_complete": is_complete(system),
    }


def cmd_classify(args) -> dict:
    system = io.system_from_json(_load(args.input), args.max_poset)
    result = classify(system)
    out = result.to_json()
    out["fibers"] = result.structure.fiber_sizes()
    return out


def cmd_dual(args) -> dict:
    system = io.system_from_json(_load(args.input), args.max_poset)
    dual = dual_system(system)
    return {
        "greatest": system.poset.greatest(),
        "limit_dim": system.limit_dim,
        "duals": {x: dual.duals[x].to_json() for x in system.poset},
    }


def cmd_equiv(args) -> dict:
    s = io.structure_from_json(_load(args.first), args.max_poset)
    t = io.structure_from_json(_load(args.second), args.max_poset)
    eq = equivalent(s, t)
    if eq is None:
        return {"equivalent": False, "verdict": "NOT_EQUIVALENT"}
    return {"equivalent": True, "verdict": "EQUIVALENT", **eq.to_json()}


def cmd_product(args) -> dict:
    first, second = _load(args.first), _load(args.second)
    kinds = {detect_kind(first), detect_kind(second)}
    if kinds == {"structure"}:
        s = product_structure(io.structure_from_json(first, args.max_poset), io.structure_from_json(second, args.max_poset))
        return {"kind": "structure", "structure": s.to_json()}
    if kinds == {"system"}:
        p = product_system(io.system_from_json(first, args.max_poset), io.system_from_json(second, args.max_poset))
        return {"kind": "system", "system": io.system_to_json(p)}
    raise SchemaError("product needs two structures or two systems")


def cmd_weil_eval(args) -> dict:
    data = _load(args.input)
    algebra = io.algebra_from_json(io._require(data, "algebra", dict))
    f = io.polymap_from_json(io._require(data, "map", dict))
    point = io.algebra_point_from_json(algebra, io._require(data, "point", list))
    value = weil_apply(algebra, f, point)
    return {"labels": list(algebra.labels), "value": [io.vector_to_json(v) for v in value]}


def cmd_fiber_dim(args) -> dict:
    mu = io.weil_system_from_json(_load(args.weil_system), args.max_poset)
    obj = io.object_from_json(_load(args.object), args.max_poset)
    fp = fiber_product(mu, obj)
    return {
        "dim": fp.dim,
        "ambient_dim": fp.total,
        "base_dim": obj.total_dim,
        "base_surjective": base_is_surjective(fp),
        "basis": [
            {x: [io.vector_to_json(v) for v in pt[x]] for x in obj.poset} for pt in fp.basis_points()
        ],
    }


def cmd_selftest(args) -> int:
    results = run_selftest(seed=args.seed, fault=args.inject_fault)
    lines = [r.line() for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} properties passed")
    _emit("\n".join(lines) + "\n", args.output)
    return 1 if failed else 0


COMMANDS = {
    "validate": cmd_validate,
    "complete": cmd_complete,
    "classify": cmd_classify,
    "dual": cmd_dual,
    "equiv": cmd_equiv,
    "product": cmd_product,
    "weil-eval": cmd_weil_eval,
    "fiber-dim": cmd_fiber_dim,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the result here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="indent JSON output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    common.add_argument("--max-poset", type=int, default=DEFAULT_MAX_POSET, help="largest accepted poset")

    parser = argparse.ArgumentParser(prog="multifoliate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a poset, system, structure or Weil object")
    p.add_argument("input")
    p.add_argument(
        "--kind", default="auto", choices=["auto", "poset", "system", "structure", "weil-algebra", "weil-system"]
    )
    for verb, help_text in (
        ("complete", "complete a projective system"),
        ("classify", "recover the multifoliate structure of a system"),
        ("dual", "dual spaces of a complete system"),
    ):
        sub.add_parser(verb, parents=[common], help=help_text).add_argument("input")
    for verb, help_text in (("equiv", "decide equivalence of two structures"), ("product", "product of two structures or systems")):
        p = sub.add_parser(verb, parents=[common], help=help_text)
        p.add_argument("first")
        p.add_argument("second")
    sub.add_parser("weil-eval", parents=[common], help="apply a Weil functor to a polynomial map").add_argument("input")
    p = sub.add_parser("fiber-dim", parents=[common], help="fiber product of a Weil system over an object")
    p.add_argument("weil_system")
    p.add_argument("object")
    p = sub.add_parser("selftest", parents=[common], help="run the acceptance properties")
    p.add_argument("--inject-fault", choices=FAULTS, default=None, help=argparse.SUPPRESS)
    return parser


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonable(value):
    # Fractions only reach here through witnesses
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "denominator") and not isinstance(value, (int, bool)):
        return format_rational(value)
    return value


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.verb == "selftest":
        return cmd_selftest(args)
    try:
        payload = COMMANDS[args.verb](args)
        code = 0
    except SchemaError as exc:
        payload, code = {"error": _jsonable(exc.to_json())}, 2
    except MultifoliateError as exc:
        payload, code = {"error": _jsonable(exc.to_json())}, 1
    if code:
        print(f"error: {payload['error']['code']}: {payload['error']['message']}", file=sys.stderr)
    _emit(io.dumps(_jsonable(payload), pretty=args.pretty), args.output)
    return code


def main() -> None:
    sys.exit(run())
