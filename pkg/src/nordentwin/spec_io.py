"""Manifold-spec files and the built-in 4-dimensional example.

A spec file is JSON::

    {
      "dim": 4,
      "params": ["l1", "l2", "l3", "l4"],
      "J": [[0, 0, 1, 0], ...],        # row i: coefficients of J X_i
      "g": [[1, 0, 0, 0], ...],        # g(X_i, X_j)
      "brackets": [
        {"i": 1, "j": 4, "coefficients": ["l1", "l2", "l3", "l4"]},
        ...
      ]
    }

Indices are 1-based. Only ``i < j`` brackets are listed; omitted ones are
zero. Matrix entries are integers or ``"p/q"`` strings.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources

import numpy as np

from .errors import SpecParseError, StructuralError
from .geometry import FrameSpec, structure_constants_from_brackets, validate_spec
from .scalars import Polynomial, as_rational, parse_polynomial
from .tensor import DOWN, UP, Tensor

EXAMPLE_PARAMS = ("l1", "l2", "l3", "l4")

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


def builtin_example() -> FrameSpec:
    """The 4-parameter Lie algebra with abelian J and neutral diagonal g."""
    V = EXAMPLE_PARAMS
    l1, l2, l3, l4 = (Polynomial.variable(v, V) for v in V)
    a = [l1, l2, l3, l4]
    b = [l2, -l1, l4, -l3]
    brackets = {
        (0, 3): a, (1, 2): a,          # [X1,X4] = [X2,X3]
        (0, 2): b, (1, 3): [-x for x in b],   # [X1,X3] = [X4,X2]
    }
    c = structure_constants_from_brackets(4, brackets, V)
    J = Tensor(4, DOWN + UP, [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    g = Tensor(4, DOWN + DOWN, np.diag([1, 1, -1, -1]).astype(object))
    return FrameSpec(4, V, c, J, g)


def _line_of(text: str, needle: str) -> int | None:
    pos = text.find(needle)
    return None if pos < 0 else text.count("\n", 0, pos) + 1


def _matrix(doc, key, dim, text):
    m = doc.get(key)
    if not isinstance(m, list) or len(m) != dim or any(
            not isinstance(r, list) or len(r) != dim for r in m):
        raise SpecParseError(f"{key!r} must be a {dim}x{dim} matrix",
                             line=_line_of(text, f'"{key}"'))
    out = []
    for i, row in enumerate(m):
        out_row = []
        for j, x in enumerate(row):
            try:
                out_row.append(as_rational(x))
            except (TypeError, ValueError, ZeroDivisionError):
                raise SpecParseError(f"{key}[{i + 1}][{j + 1}] = {x!r} is not a rational",
                                     line=_line_of(text, f'"{key}"')) from None
        out.append(out_row)
    return out


def load_spec(text: str, validate: bool = True) -> FrameSpec:
    """Parse a spec document; validation failures raise ValidationError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise SpecParseError("top level must be an object", line=1, column=1)
    for key in ("dim", "J", "g"):
        if key not in doc:
            raise SpecParseError(f"missing key {key!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
        raise SpecParseError(f"dim must be a positive integer, got {dim!r}",
                             line=_line_of(text, '"dim"'))
    if dim % 2:
        raise SpecParseError(f"dimension must be even, got {dim}",
                             line=_line_of(text, '"dim"'))
    params = doc.get("params", [])
    if not isinstance(params, list) or not all(isinstance(p, str) and _NAME.match(p)
                                               for p in params):
        raise SpecParseError("params must be a list of identifiers",
                             line=_line_of(text, '"params"'))
    params = tuple(params)
    if len(set(params)) != len(params):
        raise SpecParseError("duplicate parameter names", line=_line_of(text, '"params"'))

    J = Tensor(dim, DOWN + UP, _matrix(doc, "J", dim, text))
    g = Tensor(dim, DOWN + DOWN, _matrix(doc, "g", dim, text))

    brackets = {}
    entries = doc.get("brackets", [])
    if not isinstance(entries, list):
        raise SpecParseError("brackets must be a list", line=_line_of(text, '"brackets"'))
    for n, entry in enumerate(entries):
        where = f"brackets[{n}]"
        if not isinstance(entry, dict) or set(entry) != {"i", "j", "coefficients"}:
            raise SpecParseError(f"{where} must have exactly keys i, j, coefficients",
                                 line=_line_of(text, '"brackets"'))
        i, j, coefs = entry["i"], entry["j"], entry["coefficients"]
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= dim):
            raise SpecParseError(f"{where}: need 1 <= i < j <= {dim}, got i={i!r}, j={j!r}",
                                 line=_line_of(text, '"brackets"'))
        if (i - 1, j - 1) in brackets:
            raise SpecParseError(f"{where}: bracket [X{i}, X{j}] given twice",
                                 line=_line_of(text, '"brackets"'))
        if not isinstance(coefs, list) or len(coefs) != dim:
            raise SpecParseError(f"{where}: coefficients must list {dim} entries",
                                 line=_line_of(text, '"brackets"'))
        polys = []
        for k, s in enumerate(coefs):
            if isinstance(s, int) and not isinstance(s, bool):
                s = str(s)
            if not isinstance(s, str):
                raise SpecParseError(f"{where}.coefficients[{k}] must be a string",
                                     line=_line_of(text, '"brackets"'))
            try:
                polys.append(parse_polynomial(s, params))
            except SpecParseError as exc:
                raise SpecParseError(f"{where}.coefficients[{k}]: {exc}",
                                     line=_line_of(text, json.dumps(s))) from None
        brackets[(i - 1, j - 1)] = polys
    c = structure_constants_from_brackets(dim, brackets, params)
    spec = FrameSpec(dim, params, c, J, g)
    if validate:
        validate_spec(spec).raise_if_failed()
    return spec


def parse_spec(path_or_text) -> FrameSpec:
    """Load a spec from a file path (or a JSON string starting with '{')."""
    text = str(path_or_text)
    if not text.lstrip().startswith("{"):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    return load_spec(text)


def _rational_out(x: Polynomial):
    v = x.constant_value()
    return v.numerator if v.denominator == 1 else str(v)


def dump_spec(spec: FrameSpec) -> str:
    def matrix(t):
        return [[_rational_out(t[i, j]) for j in range(spec.dim)] for i in range(spec.dim)]

    brackets = []
    for i in range(spec.dim):
        for j in range(i + 1, spec.dim):
            coefs = spec.bracket(i, j)
            if any(p.terms for p in coefs):
                brackets.append({"i": i + 1, "j": j + 1,
                                 "coefficients": [str(p) for p in coefs]})
    doc = {"dim": spec.dim, "params": list(spec.params), "J": matrix(spec.J),
           "g": matrix(spec.g), "brackets": brackets}
    lines = ["{"]
    lines.append(f'  "dim": {spec.dim},')
    lines.append(f'  "params": {json.dumps(doc["params"])},')
    for key in ("J", "g"):
        rows = ",\n".join(f"    {json.dumps(r)}" for r in doc[key])
        lines.append(f'  "{key}": [\n{rows}\n  ],')
    rows = ",\n".join(f"    {json.dumps(b)}" for b in brackets)
    lines.append(f'  "brackets": [\n{rows}\n  ]' if brackets else '  "brackets": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def example_file_text() -> str:
    return resources.files("nordentwin").joinpath("data/w1_example.json").read_text("utf-8")
