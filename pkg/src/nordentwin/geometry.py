"""Geometry of a left-invariant frame on a Lie group.

Every vector field here is a frame field with constant coefficients, so
directional derivatives of component functions vanish and all objects are
computed from the structure constants alone.

Array conventions (0-based, output index last):

* ``c[i, j, k]``: ``[X_i, X_j] = sum_k c[i, j, k] X_k``
* ``J[i, k]``: ``J X_i = sum_k J[i, k] X_k``
* ``gamma[i, j, k]``: ``nabla_{X_i} X_j = sum_k gamma[i, j, k] X_k``
* ``R[i, j, k, l]``: ``R(X_i, X_j) X_k = sum_l R[i, j, k, l] X_l``
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (DegenerateMetricError, StructuralError, UnsupportedDimensionError,
                     UnsupportedMetricError, ValidationError)
from .tensor import DOWN, UP, MetricPair, Tensor, einsum, lower_index, metric_inverse


@dataclass(frozen=True)
class FrameSpec:
    dim: int
    params: tuple
    c: Tensor
    J: Tensor
    g: Tensor

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        for name, t, var in (("c", self.c, (DOWN, DOWN, UP)), ("J", self.J, (DOWN, UP)),
                             ("g", self.g, (DOWN, DOWN))):
            if t.dim != self.dim or t.variance != var:
                raise StructuralError(f"{name} must have dim {self.dim} and variance {''.join(var)}")

    @property
    def n(self) -> int:
        return self.dim // 2

    def bracket(self, i: int, j: int) -> list:
        return list(self.c.components[i, j])

    def substitute(self, assignment) -> "FrameSpec":
        """Spec with the given parameters replaced by rationals."""
        return FrameSpec(self.dim, self.params, self.c.partial_substitute(assignment),
                         self.J.partial_substitute(assignment),
                         self.g.partial_substitute(assignment))

    def with_metric(self, g: Tensor) -> "FrameSpec":
        return FrameSpec(self.dim, self.params, self.c, self.J, g)


@dataclass
class Check:
    name: str
    passed: bool
    index: tuple | None = None
    detail: str = ""

    def __str__(self):
        if self.passed:
            return f"PASS {self.name}"
        where = f" at {tuple(i + 1 for i in self.index)}" if self.index is not None else ""
        extra = f" ({self.detail})" if self.detail else ""
        return f"FAIL {self.name}{where}{extra}"


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def raise_if_failed(self):
        bad = self.first_failure()
        if bad is not None:
            raise ValidationError(bad.name, None if bad.index is None else
                                  tuple(i + 1 for i in bad.index), bad.detail)

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)


def _first_nonzero(arr) -> tuple | None:
    flat = np.asarray(arr, dtype=object).reshape(-1)
    for n, x in enumerate(flat):
        if x:
            return tuple(int(i) for i in np.unravel_index(n, np.shape(arr)))
    return None


def validate_spec(spec: FrameSpec) -> ValidationReport:
    report = ValidationReport()
    add = report.checks.append
    d = spec.dim
    add(Check("dimension must be even", d % 2 == 0 and d >= 2, None,
              "" if d % 2 == 0 else f"dim = {d}"))
    c = spec.c.components
    J = spec.J.components
    g = spec.g.components

    bad = _first_nonzero(c + np.transpose(c, (1, 0, 2)))
    add(Check("antisymmetry", bad is None, bad))

    # [[X_i,X_j],X_k] + [[X_j,X_k],X_i] + [[X_k,X_i],X_j]
    cc = np.einsum("ijm,mkl->ijkl", c, c, dtype=object)
    jac = cc + np.transpose(cc, (2, 0, 1, 3)) + np.transpose(cc, (1, 2, 0, 3))
    bad = _first_nonzero(jac)
    add(Check("Jacobi identity", bad is None, bad and bad[:3]))

    JJ = np.einsum("ik,km->im", J, J, dtype=object) + np.eye(d, dtype=int)
    bad = _first_nonzero(JJ)
    add(Check("J^2 = -I", bad is None, bad))

    bad = _first_nonzero(g - g.T)
    add(Check("g symmetric", bad is None, bad))

    norden = np.einsum("ia,jb,ab->ij", J, J, g, dtype=object) + g
    bad = _first_nonzero(norden)
    add(Check("Norden condition g(Jx,Jy) = -g(x,y)", bad is None, bad))

    try:
        metric_inverse(spec.g)
        add(Check("g nondegenerate", True))
    except (DegenerateMetricError, StructuralError) as exc:
        add(Check("g nondegenerate", False, None, str(exc)))
    except UnsupportedMetricError as exc:
        add(Check("g rational", False, None, str(exc)))
    return report


def twin_metric(spec: FrameSpec, g: Tensor | None = None) -> Tensor:
    """The associated metric ``g~(x, y) = g(x, Jy)``."""
    g = spec.g if g is None else g
    return einsum("ik,jk->ij", g, spec.J, variance=DOWN + DOWN)


@dataclass(frozen=True)
class Connection:
    gamma: Tensor

    @property
    def dim(self) -> int:
        return self.gamma.dim

    def __add__(self, other):
        if isinstance(other, Connection):
            raise StructuralError("the sum of two connections is not a connection")
        return Connection(self.gamma + other)

    def __sub__(self, other: "Connection") -> Tensor:
        """Difference of two connections, a (1,2) tensor."""
        return self.gamma - other.gamma

    def __eq__(self, other):
        return isinstance(other, Connection) and self.gamma == other.gamma

    def torsion(self, spec: FrameSpec) -> Tensor:
        return self.gamma - self.gamma.permute((1, 0, 2)) - spec.c

    def is_torsion_free(self, spec: FrameSpec) -> bool:
        return self.torsion(spec).is_zero()

    def apply(self, i: int, j: int) -> list:
        return list(self.gamma.components[i, j])


def average(a: Connection, b: Connection) -> Connection:
    return Connection((a.gamma + b.gamma) * Fraction(1, 2))


def levi_civita(spec: FrameSpec, metric: MetricPair | Tensor) -> Connection:
    """Koszul formula with constant metric components:
    ``2 g(nabla_x y, z) = g([x,y],z) + g([z,x],y) + g([z,y],x)``."""
    if isinstance(metric, Tensor):
        metric = MetricPair.from_metric(metric)
    cl = einsum("ijm,ml->ijl", spec.c, metric.g, variance=DOWN * 3).components
    low = (cl + np.transpose(cl, (1, 2, 0)) + np.transpose(cl, (2, 1, 0))) * Fraction(1, 2)
    gamma = einsum("ijl,lk->ijk", low, metric.g_inv, variance=DOWN + DOWN + UP,
                   dim=spec.dim)
    return Connection(gamma)


def covariant_derivative(conn: Connection, t: Tensor) -> Tensor:
    """``(nabla T)[x, ...]`` for a tensor with constant frame components.

    The derivative direction becomes the new first slot.
    """
    G = conn.gamma.components
    d = t.dim
    acc = np.empty((d,) * (t.rank + 1), dtype=object)
    acc.fill(t.components.reshape(-1)[0] * 0 if t.components.size else 0)
    for s, v in enumerate(t.variance):
        if v == DOWN:
            # -T(..., nabla_x e_a, ...)
            part = np.tensordot(G, t.components, axes=([2], [s]))
            acc = acc - np.moveaxis(part, 1, 1 + s)
        else:
            part = np.tensordot(G, t.components, axes=([1], [s]))
            acc = acc + np.moveaxis(part, 1, 1 + s)
    return Tensor._wrap(d, (DOWN,) + t.variance, acc)


def curvature(conn: Connection, spec: FrameSpec) -> Tensor:
    """(1,3) curvature ``R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z``."""
    G = conn.gamma
    first = einsum("jkm,iml->ijkl", G, G, variance="dddu").components
    bracket = einsum("ijm,mkl->ijkl", spec.c, G, variance="dddu").components
    arr = first - np.transpose(first, (1, 0, 2, 3)) - bracket
    return Tensor._wrap(spec.dim, (DOWN, DOWN, DOWN, UP), arr)


def lowered_curvature(R13: Tensor, metric: MetricPair) -> Tensor:
    """``R(x, y, z, w) = g(R(x, y)z, w)``."""
    return lower_index(R13, 3, metric)


def curvature_like_violation(t: Tensor):
    """Name and first index of the first failed curvature-like identity, or None."""
    if t.variance != (DOWN,) * 4:
        raise StructuralError("curvature-like check needs a (0,4) tensor")
    a = t.components
    for name, arr in (("R(x,y,z,w) = -R(y,x,z,w)", a + np.transpose(a, (1, 0, 2, 3))),
                      ("R(x,y,z,w) = -R(x,y,w,z)", a + np.transpose(a, (0, 1, 3, 2))),
                      ("first Bianchi identity",
                       a + np.transpose(a, (2, 0, 1, 3)) + np.transpose(a, (1, 2, 0, 3)))):
        bad = _first_nonzero(arr)
        if bad is not None:
            return name, bad
    return None


def curvature_like_check(t: Tensor) -> bool:
    return curvature_like_violation(t) is None


def ricci_and_scalar(R04: Tensor, metric: MetricPair):
    """``rho(y,z) = g^{ij} R(e_i,y,z,e_j)`` and ``tau = g^{ij} rho(e_i,e_j)``."""
    rho = einsum("ij,iyzj->yz", metric.g_inv, R04, variance=DOWN + DOWN)
    tau = einsum("ij,ij->", metric.g_inv, rho, variance="").scalar()
    return rho, tau


def kulkarni_nomizu(a: Tensor, b: Tensor) -> Tensor:
    A, B = a.components, b.components
    arr = (np.einsum("xz,yw->xyzw", A, B, dtype=object)
           - np.einsum("yz,xw->xyzw", A, B, dtype=object)
           + np.einsum("yw,xz->xyzw", A, B, dtype=object)
           - np.einsum("xw,yz->xyzw", A, B, dtype=object))
    return Tensor._wrap(a.dim, (DOWN,) * 4, arr)


def weyl(R04: Tensor, metric: MetricPair, dim: int | None = None) -> Tensor:
    dim = R04.dim if dim is None else dim
    if dim < 4 or dim % 2:
        raise UnsupportedDimensionError(f"Weyl tensor needs even dim >= 4, got {dim}")
    n = dim // 2
    rho, tau = ricci_and_scalar(R04, metric)
    g = metric.g
    return (R04 + kulkarni_nomizu(g, rho) * Fraction(1, 2 * (n - 1))
            - kulkarni_nomizu(g, g) * (tau * Fraction(1, 4 * (n - 1) * (2 * n - 1))))


def conformally_flat_form(metric: MetricPair, rho: Tensor, tau) -> Tensor:
    """The curvature a vanishing Weyl tensor forces:
    ``-1/(2(n-1)) g∧rho + tau/(4(n-1)(2n-1)) g∧g``; at dim 4 this is
    ``-1/2 g∧rho + tau/12 g∧g``."""
    n = metric.dim // 2
    g = metric.g
    return (kulkarni_nomizu(g, rho) * Fraction(-1, 2 * (n - 1))
            + kulkarni_nomizu(g, g) * (tau * Fraction(1, 4 * (n - 1) * (2 * n - 1))))


def exterior_derivative_1form(omega: Tensor, spec: FrameSpec) -> Tensor:
    """``d omega(X_i, X_j) = -omega([X_i, X_j])`` for a left-invariant form."""
    if omega.variance != (DOWN,):
        raise StructuralError("expected a 1-form")
    return -einsum("ijk,k->ij", spec.c, omega, variance=DOWN + DOWN)


def structure_constants_from_brackets(dim: int, brackets: dict, variables=()) -> Tensor:
    """Build ``c`` from ``{(i, j): [coef_1, ..., coef_dim]}`` with 0-based i < j."""
    from .scalars import Polynomial
    zero = Polynomial.zero(variables)
    arr = np.empty((dim, dim, dim), dtype=object)
    arr.fill(zero)
    for (i, j), coefs in brackets.items():
        if i == j:
            raise StructuralError(f"bracket [X{i + 1}, X{i + 1}] must be zero")
        if len(coefs) != dim:
            raise StructuralError(f"bracket ({i + 1},{j + 1}) needs {dim} coefficients")
        for k, x in enumerate(coefs):
            p = x if isinstance(x, Polynomial) else Polynomial.constant(x, variables)
            arr[i, j, k] = p
            arr[j, i, k] = -p
    return Tensor(dim, (DOWN, DOWN, UP), arr)


def iter_pairs(dim: int):
    return itertools.combinations(range(dim), 2)
