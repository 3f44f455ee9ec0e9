"""JSON wire formats for matrices, vectors, polynomials and replayable instances.

matrix      {"rows": r, "cols": c, "data": [[re, im], ...]}   row-major
vector      {"length": n, "data": [[re, im], ...]}
polynomial  {"n": n, "m": m, "coeffs": [matrix, ...]}         A_0 first
instance    {"bound_id": ..., "inputs": [...], "params": {...}}
"""
from __future__ import annotations

import json
import math

import numpy as np

from .linalg import INF, as_pnorm
from .matpoly import MatrixPolynomial


class FormatError(ValueError):
    pass


def _pairs(values):
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=np.complex128).ravel()]


def _unpairs(data, expected):
    if not isinstance(data, list) or len(data) != expected:
        raise FormatError(f"expected {expected} [re, im] entries, got {len(data) if isinstance(data, list) else type(data).__name__}")
    out = np.empty(expected, dtype=np.complex128)
    for i, pair in enumerate(data):
        if isinstance(pair, (int, float)):
            pair = [pair, 0.0]
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise FormatError(f"entry {i} is not an [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise FormatError(f"entry {i} is not finite")
        out[i] = complex(re, im)
    return out


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": _pairs(a)}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix object: {exc}") from None
    if rows < 1 or cols < 1:
        raise FormatError("rows and cols must be positive")
    return _unpairs(data, rows * cols).reshape(rows, cols)


def vector_to_json(v) -> dict:
    v = np.asarray(v, dtype=np.complex128).ravel()
    return {"length": int(v.size), "data": _pairs(v)}


def vector_from_json(obj) -> np.ndarray:
    try:
        return _unpairs(obj["data"], int(obj.get("length", len(obj["data"]))))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad vector object: {exc}") from None


def poly_to_json(poly: MatrixPolynomial) -> dict:
    return {"n": poly.n, "m": poly.m, "coeffs": [matrix_to_json(c) for c in poly.coeffs]}


def poly_from_json(obj) -> MatrixPolynomial:
    try:
        n, m, coeffs = int(obj["n"]), int(obj["m"]), obj["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad polynomial object: {exc}") from None
    if not isinstance(coeffs, list) or len(coeffs) != m + 1:
        raise FormatError(f"expected m + 1 = {m + 1} coefficient matrices")
    mats = [matrix_from_json(c) for c in coeffs]
    if any(c.shape != (n, n) for c in mats):
        raise FormatError(f"every coefficient must be {n} x {n}")
    try:
        return MatrixPolynomial(tuple(mats))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def kind_of(obj) -> str:
    if isinstance(obj, dict):
        if "bound_id" in obj and "inputs" in obj:
            return "instance"
        if "coeffs" in obj:
            return "poly"
        if "rows" in obj:
            return "matrix"
        if "data" in obj:
            return "vector"
    raise FormatError("unrecognized JSON object (expected matrix, vector, polynomial or instance)")


def value_to_json(value):
    if isinstance(value, MatrixPolynomial):
        return poly_to_json(value)
    arr = np.asarray(value)
    if arr.ndim == 2:
        return matrix_to_json(arr)
    if arr.ndim == 1:
        return vector_to_json(arr)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def value_from_json(obj):
    kind = kind_of(obj)
    if kind == "poly":
        return poly_from_json(obj)
    if kind == "matrix":
        return matrix_from_json(obj)
    if kind == "vector":
        return vector_from_json(obj)
    raise FormatError("nested instances are not allowed")


def as_poly(value) -> MatrixPolynomial:
    """Polynomials pass through; a square matrix A becomes I z - A."""
    if isinstance(value, MatrixPolynomial):
        return value
    return MatrixPolynomial.monic([-np.asarray(value, dtype=np.complex128)])


def _param_to_json(value):
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return vector_to_json(value)
    if isinstance(value, float) and value == INF:
        return "inf"
    return value


def _param_from_json(key, value):
    if key == "p":
        return as_pnorm(value)
    if key in ("x", "y"):
        return vector_from_json(value)
    if key == "lambda":
        return complex(value[0], value[1]) if isinstance(value, list) else complex(value)
    return value


def instance_to_json(bound_id: str, inputs, params: dict) -> dict:
    return {
        "bound_id": bound_id,
        "inputs": [value_to_json(v) for v in inputs],
        "params": {k: _param_to_json(v) for k, v in params.items()},
    }


def instance_from_json(obj):
    try:
        bound_id = obj["bound_id"]
        inputs = [value_from_json(v) for v in obj["inputs"]]
        params = {k: _param_from_json(k, v) for k, v in obj.get("params", {}).items()}
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad instance object: {exc}") from None
    return bound_id, inputs, params


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None


def dump_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")
