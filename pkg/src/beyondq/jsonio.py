"""JSON encoding of complex matrices and bipartite states.

Two matrix layouts are accepted on input::

    {"dim": n, "re": [[...]], "im": [[...]]}
    {"entries": [[[re, im], ...], ...]}

The first is always emitted. Bipartite files add ``"dims": [dA, dB]``.
Floats are written with Python's shortest round-trip repr, so a matrix
survives a dump/load cycle bit for bit.
"""
from __future__ import annotations

import json
import math
from typing import Any, Sequence

import numpy as np

from .linalg import DimensionError, as_hermitian


class FormatError(ValueError):
    """Malformed matrix or state JSON."""


def matrix_to_json(x: np.ndarray) -> dict:
    x = np.asarray(x, dtype=complex)
    return {
        "dim": int(x.shape[0]),
        "re": x.real.tolist(),
        "im": x.imag.tolist(),
    }


def _real(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where}: expected a number, got {type(value).__name__}")
    return float(value)


def _grid(rows: Any, field: str, n: int | None) -> list[list[Any]]:
    if not isinstance(rows, list):
        raise FormatError(f"{field}: expected a list of rows")
    n = len(rows) if n is None else n
    if len(rows) != n:
        raise FormatError(f"{field}: expected {n} rows, got {len(rows)}")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise FormatError(f"{field}[{i}]: expected a row of length {n}")
    return rows


def matrix_from_json(obj: Any, field: str = "matrix") -> np.ndarray:
    """Decode either accepted layout into a complex array (no Hermiticity check)."""
    if not isinstance(obj, dict):
        raise FormatError(f"{field}: expected an object")
    if "entries" in obj:
        rows = _grid(obj["entries"], f"{field}.entries", None)
        n = len(rows)
        out = np.empty((n, n), dtype=complex)
        for i, row in enumerate(rows):
            for j, pair in enumerate(row):
                where = f"{field}.entries[{i}][{j}]"
                if not isinstance(pair, list) or len(pair) != 2:
                    raise FormatError(f"{where}: expected [re, im]")
                out[i, j] = complex(_real(pair[0], where), _real(pair[1], where))
        return out
    if "re" not in obj:
        raise FormatError(f"{field}: missing 're' (or 'entries')")
    n = obj.get("dim")
    if n is not None and (isinstance(n, bool) or not isinstance(n, int) or n < 1):
        raise FormatError(f"{field}.dim: expected a positive integer")
    re = _grid(obj["re"], f"{field}.re", n)
    n = len(re)
    im = _grid(obj["im"], f"{field}.im", n) if "im" in obj else [[0.0] * n for _ in range(n)]
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            out[i, j] = complex(
                _real(re[i][j], f"{field}.re[{i}][{j}]"),
                _real(im[i][j], f"{field}.im[{i}][{j}]"),
            )
    return out


def hermitian_from_json(obj: Any, field: str = "matrix") -> np.ndarray:
    return as_hermitian(matrix_from_json(obj, field))


def state_to_json(x: np.ndarray, dims: Sequence[int]) -> dict:
    out = matrix_to_json(x)
    out["dims"] = [int(d) for d in dims]
    return out


def state_from_json(obj: Any, field: str = "state") -> tuple[np.ndarray, tuple[int, int]]:
    """Decode a bipartite operator and its local dimensions.

    When ``dims`` is absent the operator is assumed to be ``d x d`` with
    ``d`` a perfect square.
    """
    x = hermitian_from_json(obj, field)
    n = x.shape[0]
    dims = obj.get("dims")
    if dims is None:
        root = math.isqrt(n)
        if root * root != n:
            raise FormatError(f"{field}.dims: missing and dimension {n} is not a perfect square")
        dims = [root, root]
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims)
    ):
        raise FormatError(f"{field}.dims: expected [dA, dB] positive integers")
    if dims[0] * dims[1] != n:
        raise DimensionError(f"{field}.dims: {dims[0]}*{dims[1]} != matrix dimension {n}")
    return x, (dims[0], dims[1])


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=1, default=_default)


def _default(obj: Any):
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return matrix_to_json(obj)
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")
