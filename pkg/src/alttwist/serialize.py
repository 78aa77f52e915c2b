"""JSON file formats for algebras, involution sidecars and twisting maps.

Writers are deterministic: identical objects give identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import Algebra, make_algebra
from .errors import DimensionMismatch, ParseError
from .linalg import LinearMap
from .scalars import FieldSpec, make_field, parse_scalar, render_scalar


def algebra_to_json(A: Algebra) -> dict:
    sparse = []
    for i in range(A.dim):
        for j in range(A.dim):
            prod = A.basis_product(i, j)
            if prod:
                sparse.append([i, j, [[k, render_scalar(prod[k])] for k in sorted(prod)]])
    return {
        "name": A.name,
        "scalars": A.spec.to_json(),
        "dim": A.dim,
        "labels": list(A.labels),
        "table": {"sparse": sparse},
    }


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ParseError(msg)


def algebra_from_json(doc) -> Algebra:
    _expect(isinstance(doc, dict), "algebra document must be a JSON object")
    for key in ("scalars", "dim", "table"):
        _expect(key in doc, f"missing key {key!r}")
    field = make_field(FieldSpec.from_json(doc["scalars"]))
    dim = doc["dim"]
    _expect(isinstance(dim, int) and dim >= 1, "dim must be a positive integer")
    labels = doc.get("labels")
    table = doc["table"]
    _expect(isinstance(table, dict) and isinstance(table.get("sparse"), list), "table must be {\"sparse\": [...]}")
    sparse: dict = {}
    for entry in table["sparse"]:
        _expect(isinstance(entry, list) and len(entry) == 3, f"bad table entry {entry!r}")
        i, j, terms = entry
        _expect(isinstance(i, int) and isinstance(j, int) and isinstance(terms, list), f"bad table entry {entry!r}")
        _expect((i, j) not in sparse, f"duplicate table entry for ({i}, {j})")
        cell = {}
        for term in terms:
            _expect(isinstance(term, list) and len(term) == 2 and isinstance(term[0], int), f"bad term {term!r}")
            k, coef = term
            cell[k] = cell.get(k, field.zero) + parse_scalar(str(coef), field)
        sparse[(i, j)] = cell
    return make_algebra(field, dim, labels, sparse, name=str(doc.get("name", "")))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def sidecar_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".sigma.json")


def sidecar_to_json(sigma: LinearMap | None = None, automorphism: LinearMap | None = None) -> dict:
    doc = {}
    if sigma is not None:
        doc["sigma"] = sigma.to_json()
    if automorphism is not None:
        doc["automorphism"] = automorphism.to_json()
    return doc


def matrix_from_json(rows, field, shape: tuple[int, int] | None = None, what: str = "matrix") -> LinearMap:
    _expect(isinstance(rows, list) and rows and all(isinstance(r, list) for r in rows), f"{what} must be a list of rows")
    width = len(rows[0])
    _expect(all(len(r) == width for r in rows), f"{what} rows differ in length")
    m = LinearMap([[parse_scalar(str(x), field) for x in r] for r in rows], field)
    if shape is not None and m.shape != shape:
        raise DimensionMismatch(f"{what} has shape {m.shape}, expected {shape}")
    return m


def save_algebra(path, A: Algebra, sigma: LinearMap | None = None, automorphism: LinearMap | None = None) -> None:
    write_json(path, algebra_to_json(A))
    if sigma is not None or automorphism is not None:
        write_json(sidecar_path(path), sidecar_to_json(sigma, automorphism))


def load_algebra(path) -> tuple[Algebra, dict]:
    """Return the algebra and its sidecar maps (keys ``sigma`` / ``automorphism``)."""
    A = algebra_from_json(read_json(path))
    maps = {}
    side = sidecar_path(path)
    if side.exists():
        doc = read_json(side)
        _expect(isinstance(doc, dict), f"{side}: sidecar must be a JSON object")
        for key in ("sigma", "automorphism"):
            if key in doc:
                maps[key] = matrix_from_json(doc[key], A.field, (A.dim, A.dim), key)
    return A, maps


def twisting_to_json(R: LinearMap, A_ref: str, B_ref: str) -> dict:
    return {"A": A_ref, "B": B_ref, "R": R.to_json()}


def load_twisting(path, A: Algebra, B: Algebra) -> LinearMap:
    doc = read_json(path)
    _expect(isinstance(doc, dict) and "R" in doc, f"{path}: expected an object with key 'R'")
    n = A.dim * B.dim
    return matrix_from_json(doc["R"], A.field, (n, n), "R")
