"""JSON algebra file format.

Indices are 0-based.  Rationals are written as strings (``"3"``, ``"-7/2"``);
JSON numbers that are not integers are rejected.  Example::

    {
      "name": "g",
      "dim": 2,
      "basis": ["e1", "e2"],
      "brackets": [{"i": 0, "j": 1, "coeffs": {"1": "1"}}],
      "omega": [["0", "1"], ["-1", "0"]],
      "j": [["0", "-1"], ["1", "0"]],
      "product": [{"i": 0, "j": 0, "coeffs": {"0": "-1"}}]
    }

Brackets are normally listed for ``i < j`` only; an entry with ``i > j`` is
stored as given and its mirror is filled in only when absent, so
inconsistent input reaches the antisymmetry check instead of being
silently repaired.  A file with ``metric`` and no ``omega``/``j``/``product``
describes a metric Lie algebra (input to the cotangent construction).
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .algebra_core import BilinearFormData, LieAlgebraData, LinearMapData, MetricLieAlgebra, ProductData
from .errors import ParseError
from .exact_linalg import Matrix, Tensor3, as_rational, format_rational
from .special_kahler import SpecialKahlerAlgebra


def _q(x) -> Fraction:
    if isinstance(x, float):
        raise ParseError(f"floating-point value {x!r} is not allowed; write it as a string 'p/q'")
    return as_rational(x)


def _index(x, dim: int, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"{what} index {x!r} is not an integer")
    try:
        i = int(x)
    except ValueError:
        raise ParseError(f"{what} index {x!r} is not an integer") from None
    if not 0 <= i < dim:
        raise ParseError(f"{what} index {i} out of range for dim {dim}")
    return i


def _matrix(rows, dim: int, what: str) -> Matrix:
    if not isinstance(rows, list) or len(rows) != dim or any(
            not isinstance(r, list) or len(r) != dim for r in rows):
        raise ParseError(f"{what} must be a {dim}x{dim} list of lists")
    return Matrix.from_rows([[_q(x) for x in r] for r in rows], dim)


def _entries(items, dim: int, what: str) -> dict:
    if not isinstance(items, list):
        raise ParseError(f"{what} must be a list")
    out: dict = {}
    for it in items:
        if not isinstance(it, dict) or not {"i", "j", "coeffs"} <= set(it):
            raise ParseError(f"each {what} entry needs i, j and coeffs")
        i = _index(it["i"], dim, what)
        j = _index(it["j"], dim, what)
        coeffs = it["coeffs"]
        if not isinstance(coeffs, dict):
            raise ParseError(f"{what} coeffs must be an object")
        vec = out.setdefault((i, j), {})
        for k, c in coeffs.items():
            vec[_index(k, dim, what)] = _q(c)
    return out


def algebra_from_dict(d: dict[str, Any]) -> SpecialKahlerAlgebra | MetricLieAlgebra:
    if not isinstance(d, dict):
        raise ParseError("top level must be an object")
    if "dim" not in d:
        raise ParseError("missing 'dim'")
    dim = d["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
        raise ParseError("'dim' must be a non-negative integer")
    name = str(d.get("name", ""))
    basis = d.get("basis") or []
    if basis and len(basis) != dim:
        raise ParseError("'basis' needs one label per dimension")
    given = _entries(d.get("brackets", []), dim, "brackets")
    full = dict(given)
    for (i, j), v in given.items():
        if (j, i) not in given and i != j:
            full[(j, i)] = {k: -c for k, c in v.items()}
    lie = LieAlgebraData(dim, Tensor3.from_sparse(dim, full), tuple(basis))
    structural = [k for k in ("omega", "j", "product") if k in d]
    if "metric" in d and not structural:
        k = _matrix(d["metric"], dim, "metric")
        return MetricLieAlgebra(lie, BilinearFormData.infer(k), name)
    missing = [k for k in ("omega", "j") if k not in d]
    if missing:
        raise ParseError(f"missing {', '.join(missing)}")
    w = _matrix(d["omega"], dim, "omega")
    jm = _matrix(d["j"], dim, "j")
    prod = Tensor3.from_sparse(dim, _entries(d.get("product", []), dim, "product"))
    try:
        return SpecialKahlerAlgebra(lie, BilinearFormData.infer(w), LinearMapData(dim, jm),
                                    ProductData(dim, prod), name)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _sparse_out(t: Tensor3, upper_only: bool) -> list:
    n = t.dims[0]
    out = []
    for i in range(n):
        for j in range(n):
            if upper_only and j <= i:
                # diagonal and lower entries are implied unless they break antisymmetry
                if i == j and not any(t.vector(i, j)):
                    continue
                if j < i and all(a == -b for a, b in zip(t.vector(i, j), t.vector(j, i))):
                    continue
            coeffs = {str(k): format_rational(c) for k, c in enumerate(t.vector(i, j)) if c}
            if coeffs:
                out.append({"i": i, "j": j, "coeffs": coeffs})
    return out


def _rows_out(m: Matrix) -> list:
    return [[format_rational(x) for x in m.row(i)] for i in range(m.rows)]


def algebra_to_dict(a: SpecialKahlerAlgebra | MetricLieAlgebra, name: str | None = None) -> dict:
    lie = a.lie
    d: dict[str, Any] = {
        "name": a.name if name is None else name,
        "dim": lie.dim,
        "basis": list(lie.basis_names),
        "brackets": _sparse_out(lie.bracket, upper_only=True),
    }
    if isinstance(a, MetricLieAlgebra):
        d["metric"] = _rows_out(a.metric.matrix)
        return d
    d["omega"] = _rows_out(a.omega.matrix)
    d["j"] = _rows_out(a.j.matrix)
    d["product"] = _sparse_out(a.product.product, upper_only=False)
    return d


def dumps(obj: Any) -> str:
    """Canonical JSON text: two-space indent, insertion order, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def matrix_to_rows(m: Matrix) -> list:
    return _rows_out(m)


def matrix_from_rows(rows, what: str = "matrix") -> Matrix:
    if not isinstance(rows, list) or not rows or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{what} must be a non-empty list of lists")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError(f"{what} rows have different lengths")
    return Matrix.from_rows([[_q(x) for x in r] for r in rows], width)


def vector_from_list(values, dim: int, what: str = "vector") -> Matrix:
    if not isinstance(values, list) or len(values) != dim:
        raise ParseError(f"{what} must list {dim} rationals")
    return Matrix.column([_q(x) for x in values])


def parse_vector_text(text: str, dim: int) -> Matrix:
    """``"1,0,-1/2"`` -> column vector."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != dim:
        raise ParseError(f"expected {dim} comma-separated rationals, got {len(parts)}")
    return Matrix.column([as_rational(p) for p in parts])
