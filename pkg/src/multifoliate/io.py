"""JSON codecs. Rationals travel as strings "p/q" (integers may be bare).

Every ``*_from_json`` raises :class:`SchemaError` on malformed input; domain
violations (cycles, non-surjective maps, ...) surface as their own errors.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import SchemaError
from .linalg import Matrix, as_rational, format_rational
from .poset import MAX_ELEMENTS, Poset, validate_poset
from .projsys import ProjectiveSystem, validate_system
from .structures import MultifoliateStructure, validate_structure
from .weil.algebra import WeilAlgebra, truncated_polynomial_algebra, validate_weil_algebra
from .weil.fiber import CartesianMultifibered, WeilSystem, cartesian_object, i_alpha, validate_weil_system
from .weil.polynomial import PolyMap


def _require(data, key, kind=None):
    if not isinstance(data, dict):
        raise SchemaError(f"expected an object holding {key!r}")
    if key not in data:
        raise SchemaError(f"missing field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"field {key!r} has the wrong type")
    return value


def rational_from_json(value):
    if isinstance(value, float):
        raise SchemaError(f"inexact number {value!r}; write rationals as strings like \"1/3\"")
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a rational: {value!r}") from exc


def matrix_from_json(data, rows: int | None = None, cols: int | None = None) -> Matrix:
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        raise SchemaError("a matrix is a list of rows")
    entries = [[rational_from_json(v) for v in r] for r in data]
    width = len(entries[0]) if entries else (cols or 0)
    if any(len(r) != width for r in entries):
        raise SchemaError("matrix rows have different lengths")
    return Matrix(entries, cols=width)


def matrix_to_json(m: Matrix) -> list:
    return m.to_json()


def vector_to_json(v) -> list[str]:
    return [format_rational(c) for c in v]


# posets


def poset_from_json(data, max_size: int = MAX_ELEMENTS) -> Poset:
    elements = _require(data, "elements", list)
    if any(not isinstance(e, str) for e in elements):
        raise SchemaError("poset elements must be strings")
    leq = data.get("leq", [])
    if not isinstance(leq, list) or any(
        not isinstance(p, list) or len(p) != 2 or not all(isinstance(e, str) for e in p) for p in leq
    ):
        raise SchemaError("leq must be a list of [x, y] string pairs")
    return validate_poset(elements, [tuple(p) for p in leq], max_size=max_size)


def poset_to_json(p: Poset) -> dict:
    return p.to_json()


# projective systems


def system_from_json(data, max_size: int = MAX_ELEMENTS) -> ProjectiveSystem:
    poset = poset_from_json(_require(data, "poset", dict), max_size)
    dims = _require(data, "dims", dict)
    if any(not isinstance(v, int) or isinstance(v, bool) for v in dims.values()):
        raise SchemaError("dims must map elements to integers")
    maps = {}
    for entry in data.get("maps", []):
        hi = _require(entry, "from", str)
        lo = _require(entry, "to", str)
        cols = dims.get(hi) if isinstance(dims.get(hi), int) else None
        maps[(lo, hi)] = matrix_from_json(_require(entry, "matrix", list), cols=cols)
    projections = None
    limit_dim = None
    if "limit" in data:
        lim = _require(data, "limit", dict)
        limit_dim = _require(lim, "dim", int)
        projections = {
            x: matrix_from_json(m, cols=limit_dim) for x, m in _require(lim, "projections", dict).items()
        }
    return validate_system(poset, dims, maps, projections=projections, limit_dim=limit_dim)


def system_to_json(system: ProjectiveSystem, all_pairs: bool = False) -> dict:
    """Maps on covers only unless ``all_pairs``; the limit projections are always included."""
    pairs = system.poset.strict_pairs() if all_pairs else system.poset.covers()
    return {
        "poset": system.poset.to_json(),
        "dims": {x: system.dims[x] for x in system.poset},
        "maps": [{"from": hi, "to": lo, "matrix": system.map(lo, hi).to_json()} for lo, hi in pairs],
        "limit": {
            "dim": system.limit_dim,
            "projections": {x: system.projections[x].to_json() for x in system.poset},
        },
    }


# multifoliate structures


def structure_from_json(data, max_size: int = MAX_ELEMENTS) -> MultifoliateStructure:
    poset = poset_from_json(_require(data, "poset", dict), max_size)
    n = _require(data, "n", int)
    p = _require(data, "p", (dict, list))
    if isinstance(p, dict):
        try:
            p = {int(k): v for k, v in p.items()}
        except ValueError as exc:
            raise SchemaError("keys of p must be coordinate numbers") from exc
    return validate_structure(poset, n, p)


def structure_to_json(s: MultifoliateStructure) -> dict:
    return s.to_json()


# Weil algebras and systems


def algebra_from_json(data) -> WeilAlgebra:
    """``{"dim", "table", "labels"?}`` or the shorthand ``{"truncated": order, "nvars"?}``."""
    if isinstance(data, dict) and "truncated" in data:
        order = _require(data, "truncated", int)
        nvars = data.get("nvars", 1)
        if not isinstance(nvars, int) or order < 0 or nvars < 1:
            raise SchemaError("truncated algebras need order >= 0 and nvars >= 1")
        return truncated_polynomial_algebra(order, nvars)
    dim = _require(data, "dim", int)
    table = _require(data, "table", list)
    if len(table) != dim:
        raise SchemaError(f"table has {len(table)} rows, dim is {dim}")
    parsed = []
    for row in table:
        if not isinstance(row, list) or len(row) != dim:
            raise SchemaError("table must be dim x dim x dim")
        parsed_row = []
        for vec in row:
            if not isinstance(vec, list) or len(vec) != dim:
                raise SchemaError("table must be dim x dim x dim")
            parsed_row.append([rational_from_json(c) for c in vec])
        parsed.append(parsed_row)
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim):
        raise SchemaError("labels must list one name per basis element")
    return validate_weil_algebra(parsed, labels=labels)


def algebra_to_json(a: WeilAlgebra) -> dict:
    return a.to_json()


def weil_system_from_json(data, max_size: int = MAX_ELEMENTS) -> WeilSystem:
    """Homs are listed as ``{"from": lo, "to": hi, "matrix"}``, i.e. A_lo -> A_hi."""
    poset = poset_from_json(_require(data, "poset", dict), max_size)
    algebras = {x: algebra_from_json(a) for x, a in _require(data, "algebras", dict).items()}
    homs = {}
    for entry in data.get("homs", []):
        lo = _require(entry, "from", str)
        hi = _require(entry, "to", str)
        homs[(lo, hi)] = matrix_from_json(_require(entry, "matrix", list))
    return validate_weil_system(poset, algebras, homs)


def weil_system_to_json(mu: WeilSystem) -> dict:
    return {
        "poset": mu.poset.to_json(),
        "algebras": {x: mu.algebras[x].to_json() for x in mu.poset},
        "homs": [{"from": lo, "to": hi, "matrix": mu.hom(lo, hi).matrix.to_json()} for lo, hi in mu.poset.covers()],
    }


def object_from_json(data, max_size: int = MAX_ELEMENTS) -> CartesianMultifibered:
    """A structure, a projective system, or ``{"poset", "i_alpha": {"alpha", "m"}}``."""
    if isinstance(data, dict) and "i_alpha" in data:
        poset = poset_from_json(_require(data, "poset", dict), max_size)
        request = _require(data, "i_alpha", dict)
        return i_alpha(poset, _require(request, "alpha", str), _require(request, "m", int))
    if isinstance(data, dict) and "p" in data:
        return cartesian_object(structure_from_json(data, max_size))
    return CartesianMultifibered(system_from_json(data, max_size))


def polymap_from_json(data) -> PolyMap:
    return PolyMap.from_json(data)


def algebra_point_from_json(a: WeilAlgebra, data) -> list[tuple]:
    if not isinstance(data, list):
        raise SchemaError("an algebra point is a list of algebra elements")
    out = []
    for v in data:
        if not isinstance(v, list) or len(v) != a.dim:
            raise SchemaError(f"algebra elements need {a.dim} coordinates")
        out.append(tuple(rational_from_json(c) for c in v))
    return out


def dumps(payload: Any, pretty: bool = False) -> str:
    """Deterministic serialization: key order as built, fixed separators, trailing newline."""
    if pretty:
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False) + "\n"
