"""Connection description files: exact JSON, rationals as "p/q" strings.

A file carries either an explicit action matrix (each entry an array of
rational strings, coefficient of h^i at index i) or a single constructor
block referencing other files.  Constructors are expanded recursively with
cycle detection; nested objects are also accepted in place of file paths.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

from .connection import (Connection, direct_sum, dual, exponential_twist,
                         hypergeometric, make_connection, tate_twist, tensor,
                         wedge)
from .errors import ParseError, CycleError, ShapeError
from .matrices import PolyMatrix
from .poly import Poly

_CONSTRUCTORS = ("hypergeometric", "filtered", "tensor", "dual", "wedge",
                 "tate", "exp", "sum")


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rational must be a string, got {text!r}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None
    return value


def format_rational(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def parse_connection_file(path: str) -> Connection:
    return _parse_file(os.path.abspath(path), chain=())


def _parse_file(path: str, chain: tuple[str, ...]) -> Connection:
    real = os.path.realpath(path)
    if real in chain:
        raise CycleError(f"cyclic file reference through {path}")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from None
    return _parse_object(data, os.path.dirname(path), chain + (real,))


def _parse_object(data, base_dir: str, chain: tuple[str, ...]) -> Connection:
    if not isinstance(data, dict):
        raise ParseError(f"connection description must be an object, "
                         f"got {type(data).__name__}")
    has_matrix = "matrix" in data
    has_constructor = "constructor" in data
    if has_matrix == has_constructor:
        raise ParseError("exactly one of 'matrix' or 'constructor' required")
    label = data.get("label")
    if has_matrix:
        conn = _parse_matrix_form(data)
    else:
        conn = _parse_constructor(data["constructor"], base_dir, chain)
    return conn.relabel(label) if label else conn


def _parse_matrix_form(data) -> Connection:
    if "rank" not in data:
        raise ParseError("matrix form requires 'rank'")
    rank = data["rank"]
    if not isinstance(rank, int) or rank < 1:
        raise ParseError(f"rank must be a positive integer, got {rank!r}")
    matrix = data["matrix"]
    if not isinstance(matrix, list) or len(matrix) != rank or \
            any(not isinstance(row, list) or len(row) != rank
                for row in matrix):
        raise ShapeError(f"matrix must be {rank}x{rank}")
    rows = []
    for row in matrix:
        poly_row = []
        for entry in row:
            if not isinstance(entry, list):
                raise ParseError("matrix entries must be coefficient arrays")
            poly_row.append(Poly([parse_rational(c) for c in entry]))
        rows.append(poly_row)
    return make_connection(rank, PolyMatrix(rows))


def _parse_constructor(block, base_dir: str, chain) -> Connection:
    if not isinstance(block, dict) or len(block) != 1:
        raise ParseError("constructor block must hold exactly one operation")
    (name, args), = block.items()
    if name not in _CONSTRUCTORS:
        raise ParseError(f"unknown constructor {name!r}")

    def sub(ref) -> Connection:
        if isinstance(ref, str):
            return _parse_file(os.path.join(base_dir, ref), chain)
        return _parse_object(ref, base_dir, chain)

    if name == "hypergeometric":
        alpha = [parse_rational(a) for a in _field(args, "alpha", list)]
        return hypergeometric(alpha)
    if name == "filtered":
        levels = _field(args, "levels", list)
        return _filtered_from_levels(levels)
    if name == "tensor":
        if not isinstance(args, list) or len(args) != 2:
            raise ParseError("tensor constructor takes two references")
        return tensor(sub(args[0]), sub(args[1]))
    if name == "sum":
        if not isinstance(args, list) or len(args) != 2:
            raise ParseError("sum constructor takes two references")
        return direct_sum(sub(args[0]), sub(args[1]))
    if name == "dual":
        return dual(sub(args))
    if name == "wedge":
        return wedge(sub(_field(args, "of")), _int_field(args, "r"))
    if name == "tate":
        return tate_twist(sub(_field(args, "of")), _int_field(args, "ell"))
    if name == "exp":
        return exponential_twist(sub(_field(args, "of")),
                                 parse_rational(_field(args, "c")))
    raise ParseError(f"unhandled constructor {name!r}")


def _field(args, key, typ=None):
    if not isinstance(args, dict) or key not in args:
        raise ParseError(f"constructor argument {key!r} missing")
    value = args[key]
    if typ is not None and not isinstance(value, typ):
        raise ParseError(f"constructor argument {key!r} has wrong type")
    return value


def _int_field(args, key) -> int:
    value = _field(args, key)
    if not isinstance(value, int):
        raise ParseError(f"constructor argument {key!r} must be an integer")
    return value


def _filtered_from_levels(levels) -> Connection:
    """Rees connection of a filtered space given by its level multiset."""
    if not levels or any(not isinstance(v, int) for v in levels):
        raise ParseError("filtered levels must be a nonempty integer array")
    n = len(levels)
    ordered = sorted(levels)
    rows = [[Poly([0, ordered[i]]) if i == j else Poly() for j in range(n)]
            for i in range(n)]
    return make_connection(n, PolyMatrix(rows))


def connection_to_json(conn: Connection) -> dict:
    matrix = [[[format_rational(c) for c in entry.coeffs] or ["0/1"]
               for entry in row] for row in conn.action.entries]
    out = {"rank": conn.rank, "matrix": matrix}
    if conn.label:
        out["label"] = conn.label
    return out


def write_connection_file(conn: Connection, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(connection_to_json(conn), handle, indent=1)
        handle.write("\n")
