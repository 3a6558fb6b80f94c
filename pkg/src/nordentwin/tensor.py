"""Dense frame tensors with exact polynomial components.

Components live in a numpy object array of shape ``(dim,) * rank``. Slot 0
is the leftmost argument. For tensors that return a vector, such as
``Phi(x, y)`` or ``R(x, y)z``, the output (up) slot is stored last, so
lowering the last slot gives ``Phi(x, y, z) = g(Phi(x, y), z)`` directly.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import DegenerateMetricError, StructuralError, UnsupportedMetricError
from .scalars import Polynomial, as_rational

UP = "u"
DOWN = "d"


def _variance(v) -> tuple:
    if isinstance(v, str):
        v = tuple(v)
    out = []
    for s in v:
        s = {"up": UP, "down": DOWN}.get(s, s)
        if s not in (UP, DOWN):
            raise StructuralError(f"bad variance slot {s!r}")
        out.append(s)
    return tuple(out)


def _to_poly(x, variables: tuple) -> Polynomial:
    if isinstance(x, Polynomial):
        return x.with_variables(variables) if x.variables != variables else x
    return Polynomial.constant(as_rational(x), variables)


def _common_variables(items) -> tuple:
    found = ()
    for x in items:
        if isinstance(x, Polynomial) and x.variables and x.variables != found:
            if not found:
                found = x.variables
            elif x.terms:
                raise StructuralError(f"components use different variable lists: "
                                      f"{found} vs {x.variables}")
    return found


class Tensor:
    """Immutable dense tensor over a ``dim``-dimensional frame."""

    __slots__ = ("dim", "variance", "components", "variables")

    def __init__(self, dim: int, variance, components):
        variance = _variance(variance)
        if dim < 1:
            raise StructuralError("dimension must be positive")
        arr = np.asarray(components, dtype=object)
        shape = (dim,) * len(variance)
        if arr.shape != shape:
            raise StructuralError(f"component array shape {arr.shape} != {shape}")
        flat = arr.reshape(-1)
        variables = _common_variables(flat)
        out = np.empty(shape, dtype=object)
        out_flat = out.reshape(-1)
        for n, x in enumerate(flat):
            out_flat[n] = _to_poly(x, variables)
        out.flags.writeable = False
        self.dim = dim
        self.variance = variance
        self.components = out
        self.variables = variables

    @classmethod
    def _wrap(cls, dim, variance, arr, variables=None):
        # arr must contain Polynomials; variables recomputed when not given
        t = object.__new__(cls)
        arr = np.asarray(arr, dtype=object)
        if variables is None:
            variables = _common_variables(arr.reshape(-1))
            if any(x.variables != variables for x in arr.reshape(-1)):
                return cls(dim, variance, arr)
        arr.flags.writeable = False
        t.dim = dim
        t.variance = tuple(variance)
        t.components = arr
        t.variables = variables
        return t

    @classmethod
    def zeros(cls, dim: int, variance, variables: Iterable[str] = ()) -> "Tensor":
        variance = _variance(variance)
        variables = tuple(variables)
        arr = np.empty((dim,) * len(variance), dtype=object)
        arr.fill(Polynomial.zero(variables))
        return cls._wrap(dim, variance, arr, variables)

    @classmethod
    def identity(cls, dim: int) -> "Tensor":
        """The (1,1) identity, stored with variance (down, up)."""
        return cls(dim, DOWN + UP, np.eye(dim, dtype=int).astype(object))

    @property
    def rank(self) -> int:
        return len(self.variance)

    def __getitem__(self, index) -> Polynomial:
        return self.components[index]

    def __iter__(self):
        raise TypeError("iterate over Tensor.indices() instead")

    def indices(self):
        return itertools.product(range(self.dim), repeat=self.rank)

    # -- algebra ----------------------------------------------------------

    def _check_same_shape(self, other: "Tensor"):
        if not isinstance(other, Tensor):
            raise StructuralError(f"expected Tensor, got {type(other).__name__}")
        if other.dim != self.dim or other.variance != self.variance:
            raise StructuralError(
                f"tensor shapes differ: dim {self.dim} {''.join(self.variance)} vs "
                f"dim {other.dim} {''.join(other.variance)}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same_shape(other)
        return Tensor._wrap(self.dim, self.variance, self.components + other.components)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same_shape(other)
        return Tensor._wrap(self.dim, self.variance, self.components - other.components)

    def __neg__(self) -> "Tensor":
        return Tensor._wrap(self.dim, self.variance, -self.components, self.variables)

    def __mul__(self, scalar) -> "Tensor":
        if isinstance(scalar, Tensor):
            return NotImplemented
        if not isinstance(scalar, Polynomial):
            scalar = as_rational(scalar)
        return Tensor._wrap(self.dim, self.variance, self.components * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Tensor":
        return self * (1 / as_rational(scalar))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        if other.dim != self.dim or other.variance != self.variance:
            return False
        return self.first_difference(other) is None

    __hash__ = None

    def first_difference(self, other: "Tensor"):
        """First index (0-based) where the components differ, or None."""
        self._check_same_shape(other)
        a = self.components.reshape(-1)
        b = other.components.reshape(-1)
        for n in range(a.size):
            if a[n] != b[n]:
                return tuple(int(i) for i in np.unravel_index(n, self.components.shape))
        return None

    def first_nonzero(self):
        flat = self.components.reshape(-1)
        for n in range(flat.size):
            if flat[n].terms:
                return tuple(int(i) for i in np.unravel_index(n, self.components.shape))
        return None

    def is_zero(self) -> bool:
        return all(not x.terms for x in self.components.reshape(-1))

    def permute(self, order: Iterable[int]) -> "Tensor":
        """Slot ``k`` of the result is slot ``order[k]`` of self."""
        order = tuple(order)
        if sorted(order) != list(range(self.rank)):
            raise StructuralError(f"{order} is not a permutation of the slots")
        return Tensor._wrap(self.dim, tuple(self.variance[k] for k in order),
                            np.transpose(self.components, order), self.variables)

    def apply(self, fn) -> "Tensor":
        vec = np.frompyfunc(fn, 1, 1)
        return Tensor._wrap(self.dim, self.variance,
                            np.asarray(vec(self.components), dtype=object).reshape(self.components.shape))

    def substitute(self, assignment: Mapping[str, object]) -> "Tensor":
        """Evaluate every component; the result has constant components."""
        return self.apply(lambda p: Polynomial.constant(p.substitute(assignment)))

    def partial_substitute(self, assignment: Mapping[str, object]) -> "Tensor":
        return self.apply(lambda p: p.partial_substitute(assignment))

    def scalar(self) -> Polynomial:
        if self.rank:
            raise StructuralError("not a rank-0 tensor")
        return self.components[()]

    def to_lists(self):
        return self.components.tolist()

    def __repr__(self):
        return f"Tensor(dim={self.dim}, variance={''.join(self.variance)!r})"


def einsum(subscripts: str, *operands, variance, dim=None) -> Tensor:
    """``numpy.einsum`` over component arrays, wrapped back into a Tensor."""
    arrays = [op.components if isinstance(op, Tensor) else op for op in operands]
    if dim is None:
        dim = next(op.dim for op in operands if isinstance(op, Tensor))
    result = np.einsum(subscripts, *arrays, dtype=object)
    result = np.asarray(result, dtype=object)
    if result.ndim == 0:
        value = result[()]
        result = np.empty((), dtype=object)
        result[()] = value if isinstance(value, Polynomial) else Polynomial.constant(value)
    return Tensor._wrap(dim, _variance(variance), result)


def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    if a.dim != b.dim:
        raise StructuralError("tensor product of tensors over different frames")
    arr = np.multiply.outer(a.components, b.components)
    return Tensor._wrap(a.dim, a.variance + b.variance, arr)


def contract(t: Tensor, slot_a: int, slot_b: int) -> Tensor:
    """Trace over one up slot and one down slot."""
    r = t.rank
    for s in (slot_a, slot_b):
        if not 0 <= s < r:
            raise StructuralError(f"slot {s} out of range for rank {r}")
    if slot_a == slot_b:
        raise StructuralError("contraction needs two distinct slots")
    if t.variance[slot_a] == t.variance[slot_b]:
        raise StructuralError(
            f"cannot contract slots {slot_a} and {slot_b}: both are "
            f"{'up' if t.variance[slot_a] == UP else 'down'}")
    arr = np.trace(t.components, axis1=slot_a, axis2=slot_b)
    variance = tuple(v for k, v in enumerate(t.variance) if k not in (slot_a, slot_b))
    if not variance:
        value = arr if isinstance(arr, Polynomial) else np.asarray(arr, dtype=object)[()]
        out = np.empty((), dtype=object)
        out[()] = value
        arr = out
    return Tensor._wrap(t.dim, variance, np.asarray(arr, dtype=object))


def _rational_matrix(g: Tensor) -> list:
    rows = []
    for i in range(g.dim):
        row = []
        for j in range(g.dim):
            p = g[i, j]
            if not p.is_constant():
                raise UnsupportedMetricError(
                    f"metric entry ({i + 1},{j + 1}) = {p} depends on parameters")
            row.append(p.constant_value())
        rows.append(row)
    return rows


def _invert(m: list) -> list:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise DegenerateMetricError("metric is degenerate (zero determinant)")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def metric_inverse(g: Tensor) -> Tensor:
    if g.variance != (DOWN, DOWN):
        raise StructuralError("metric must be a (0,2) tensor")
    m = _rational_matrix(g)
    for i in range(g.dim):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise StructuralError(f"metric is not symmetric at ({i + 1},{j + 1})")
    inv = _invert(m)
    return Tensor(g.dim, UP + UP, inv)


@dataclass(frozen=True)
class MetricPair:
    g: Tensor
    g_inv: Tensor

    @classmethod
    def from_metric(cls, g: Tensor) -> "MetricPair":
        return cls(g, metric_inverse(g))

    @property
    def dim(self) -> int:
        return self.g.dim


def lower_index(t: Tensor, slot: int, metric: MetricPair) -> Tensor:
    if t.variance[slot] != UP:
        raise StructuralError(f"slot {slot} is not an up slot")
    # contract slot with the first index of g, put the new index back in place
    arr = np.tensordot(t.components, metric.g.components, axes=([slot], [0]))
    arr = np.moveaxis(arr, -1, slot)
    variance = t.variance[:slot] + (DOWN,) + t.variance[slot + 1:]
    return Tensor._wrap(t.dim, variance, arr)


def raise_index(t: Tensor, slot: int, metric: MetricPair) -> Tensor:
    if t.variance[slot] != DOWN:
        raise StructuralError(f"slot {slot} is not a down slot")
    arr = np.tensordot(t.components, metric.g_inv.components, axes=([slot], [0]))
    arr = np.moveaxis(arr, -1, slot)
    variance = t.variance[:slot] + (UP,) + t.variance[slot + 1:]
    return Tensor._wrap(t.dim, variance, arr)


def _header(rank: int) -> list:
    return ["ijkl"[n] if rank <= 4 else f"i{n}" for n in range(rank)]


def table_rows(t: Tensor, include_zero: bool = False):
    """(1-based index tuple, polynomial) pairs in lexicographic index order."""
    for idx in t.indices():
        p = t[idx]
        if include_zero or p.terms:
            yield tuple(i + 1 for i in idx), p


def format_table(t: Tensor, include_zero: bool = False, fmt: str = "text",
                 name: str | None = None) -> str:
    rows = list(table_rows(t, include_zero))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(([ "tensor"] if name else []) + _header(t.rank) + ["value"])
        for idx, p in rows:
            w.writerow(([name] if name else []) + list(idx) + [str(p)])
        return buf.getvalue()
    if fmt != "text":
        raise StructuralError(f"unknown table format {fmt!r}")
    lines = []
    if name:
        lines.append(f"# {name}")
    for idx, p in rows:
        lines.append(f"{' '.join(str(i) for i in idx)} : {p}" if idx else f": {p}")
    return "\n".join(lines) + ("\n" if lines else "")
