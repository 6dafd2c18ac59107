"""JSON file formats for objects, morphisms and reports.

Entries are decimal strings (rationals as ``"a/b"``), never floats.  Keys are
emitted in a fixed order so equal values serialise to identical bytes.
"""

from __future__ import annotations

import json

from .errors import InputError
from .linalg import FGModule, Matrix, ModuleMap, Ring
from .perv import PervMorphism, PervObject


def module_to_json(M: FGModule) -> dict:
    if M.ring.is_field:
        return {"dim": M.free_rank}
    return {"free_rank": M.free_rank, "invariant_factors": list(M.invariant_factors)}


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: expected an integer, got {x!r}")
    return x


def module_from_json(ring: Ring, data, where: str) -> FGModule:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a module record")
    try:
        if ring.is_field:
            if set(data) != {"dim"}:
                raise InputError(f"{where}: field modules are written as {{\"dim\": n}}")
            return FGModule(ring, _int(data["dim"], f"{where}.dim"))
        if set(data) != {"free_rank", "invariant_factors"}:
            raise InputError(f"{where}: Z-modules need exactly free_rank and invariant_factors")
        factors = data["invariant_factors"]
        if not isinstance(factors, list):
            raise InputError(f"{where}.invariant_factors: expected a list")
        return FGModule(ring, _int(data["free_rank"], f"{where}.free_rank"),
                        [_int(d, f"{where}.invariant_factors") for d in factors])
    except InputError as e:
        msg = str(e)
        raise InputError(msg if msg.startswith(where) else f"{where}: {msg}") from None


def matrix_to_json(m: Matrix) -> list:
    fmt = m.ring.format_element
    return [[fmt(x) for x in row] for row in m.rows]


def matrix_from_json(ring: Ring, data, nrows: int, ncols: int, where: str) -> Matrix:
    if not isinstance(data, list) or len(data) != nrows:
        raise InputError(f"{where}: expected {nrows} rows")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != ncols:
            raise InputError(f"{where}[{i}]: expected {ncols} entries")
        out = []
        for x in row:
            if not isinstance(x, str):
                raise InputError(f"{where}[{i}]: entries must be decimal strings, got {x!r}")
            try:
                out.append(ring.parse_element(x))
            except InputError as e:
                raise InputError(f"{where}[{i}]: {e}") from None
        rows.append(out)
    return Matrix(ring, rows, ncols)


def object_to_json(P: PervObject) -> dict:
    return {
        "kind": "object",
        "ring": str(P.ring),
        "branches": P.branches,
        "psi": [module_to_json(M) for M in P.psi],
        "phi": module_to_json(P.phi),
        "can": [matrix_to_json(f.matrix) for f in P.can],
        "var": [matrix_to_json(f.matrix) for f in P.var],
    }


def _map(dom, cod, data, where) -> ModuleMap:
    m = matrix_from_json(dom.ring, data, cod.ngens, dom.ngens, where)
    try:
        return ModuleMap(dom, cod, m)
    except InputError as e:
        raise InputError(f"{where}: {e}") from None


def object_from_json(data, where: str = "object") -> PervObject:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    for key in ("ring", "branches", "psi", "phi", "can", "var"):
        if key not in data:
            raise InputError(f"{where}.{key}: missing")
    extra = set(data) - {"kind", "ring", "branches", "psi", "phi", "can", "var"}
    if extra:
        raise InputError(f"{where}.{sorted(extra)[0]}: unknown field")
    if data.get("kind", "object") != "object":
        raise InputError(f"{where}.kind: expected 'object'")
    try:
        ring = Ring.parse(data["ring"])
    except InputError as e:
        raise InputError(f"{where}.ring: {e}") from None
    r = _int(data["branches"], f"{where}.branches")
    if r < 1:
        raise InputError(f"{where}.branches: must be at least 1")
    for key in ("psi", "can", "var"):
        if not isinstance(data[key], list) or len(data[key]) != r:
            raise InputError(f"{where}.{key}: expected a list of {r} entries")
    psi = [module_from_json(ring, m, f"{where}.psi[{i}]") for i, m in enumerate(data["psi"])]
    phi = module_from_json(ring, data["phi"], f"{where}.phi")
    can = [_map(psi[i], phi, data["can"][i], f"{where}.can[{i}]") for i in range(r)]
    var = [_map(phi, psi[i], data["var"][i], f"{where}.var[{i}]") for i in range(r)]
    return PervObject(ring, psi, phi, can, var)


def morphism_to_json(T: PervMorphism) -> dict:
    return {
        "kind": "morphism",
        "source": object_to_json(T.source),
        "target": object_to_json(T.target),
        "a": [matrix_to_json(f.matrix) for f in T.a],
        "b": matrix_to_json(T.b.matrix),
    }


def morphism_from_json(data, where: str = "morphism") -> PervMorphism:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    for key in ("source", "target", "a", "b"):
        if key not in data:
            raise InputError(f"{where}.{key}: missing")
    extra = set(data) - {"kind", "source", "target", "a", "b"}
    if extra:
        raise InputError(f"{where}.{sorted(extra)[0]}: unknown field")
    if data.get("kind", "morphism") != "morphism":
        raise InputError(f"{where}.kind: expected 'morphism'")
    P = object_from_json(data["source"], f"{where}.source")
    Q = object_from_json(data["target"], f"{where}.target")
    if P.ring != Q.ring:
        raise InputError(f"{where}.target.ring: {Q.ring} does not match source ring {P.ring}")
    if P.branches != Q.branches:
        raise InputError(f"{where}.target.branches: {Q.branches} does not match source {P.branches}")
    if not isinstance(data["a"], list) or len(data["a"]) != P.branches:
        raise InputError(f"{where}.a: expected a list of {P.branches} matrices")
    a = [_map(P.psi[i], Q.psi[i], data["a"][i], f"{where}.a[{i}]") for i in range(P.branches)]
    b = _map(P.phi, Q.phi, data["b"], f"{where}.b")
    return PervMorphism(P, Q, a, b)


def to_json(x) -> dict:
    if isinstance(x, PervObject):
        return object_to_json(x)
    if isinstance(x, PervMorphism):
        return morphism_to_json(x)
    raise InputError(f"cannot serialise {type(x).__name__}")


def from_json(data):
    if isinstance(data, dict) and data.get("kind") == "morphism":
        return morphism_from_json(data)
    if isinstance(data, dict) and "source" in data and "kind" not in data:
        return morphism_from_json(data)
    return object_from_json(data)


def dumps(data) -> str:
    if not isinstance(data, (dict, list)):
        data = to_json(data)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"file: not valid JSON ({e.msg} at line {e.lineno})") from None
    return from_json(data)
