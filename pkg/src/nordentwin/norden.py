"""Objects attached to an almost complex structure with a Norden metric.

Functions take the metric currently playing the role of ``g`` together with
its Levi-Civita connection. Running the same functions with the associated
metric and its connection gives the tilde objects.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ClassMismatchError, ConsistencyError
from .geometry import (Connection, FrameSpec, average, covariant_derivative, curvature,
                       exterior_derivative_1form, lowered_curvature, ricci_and_scalar,
                       twin_metric, weyl)
from .scalars import Polynomial
from .tensor import DOWN, UP, MetricPair, Tensor, einsum, lower_index, raise_index


class ClassLabel(str, enum.Enum):
    W0 = "W0"
    W1 = "W1"
    W2 = "W2"
    W3 = "W3"
    W1_W2 = "W1⊕W2"
    W1_W3 = "W1⊕W3"
    W2_W3 = "W2⊕W3"
    W1_W2_W3 = "W1⊕W2⊕W3"

    def __str__(self):
        return self.value


def _require(name: str, residual: Tensor):
    bad = residual.first_nonzero()
    if bad is not None:
        raise ConsistencyError(name, tuple(i + 1 for i in bad))


def with_J(t: Tensor, slot: int, J: Tensor) -> Tensor:
    """Insert J at a slot: ``T(..., J e_a, ...)`` for a down slot, ``J(T(...))``
    for the up (output) slot."""
    if t.variance[slot] == DOWN:
        arr = np.tensordot(J.components, t.components, axes=([1], [slot]))
        arr = np.moveaxis(arr, 0, slot)
    else:
        arr = np.tensordot(t.components, J.components, axes=([slot], [0]))
        arr = np.moveaxis(arr, -1, slot)
    return Tensor._wrap(t.dim, t.variance, arr)


# -- F, Lee forms, potential ---------------------------------------------------

def nabla_J(conn: Connection, spec: FrameSpec) -> Tensor:
    """``(nabla_x J) y`` as a (1,2) tensor indexed [x, y, out]."""
    return covariant_derivative(conn, spec.J)


def fundamental_F(conn: Connection, spec: FrameSpec, metric: MetricPair,
                  check: bool = True) -> Tensor:
    F = lower_index(nabla_J(conn, spec), 2, metric)
    if check:
        _require("F(x,y,z) = F(x,z,y)", F - F.permute((0, 2, 1)))
        _require("F(x,y,z) = F(x,Jy,Jz)", F - with_J(with_J(F, 1, spec.J), 2, spec.J))
    return F


def lee_forms(F: Tensor, metric: MetricPair, spec: FrameSpec):
    """``theta(z) = g^{ij} F(e_i, e_j, z)``, ``theta*(z) = g^{ij} F(e_i, J e_j, z)``."""
    theta = einsum("ij,ijz->z", metric.g_inv, F, variance=DOWN)
    theta_star = einsum("ij,jm,imz->z", metric.g_inv, spec.J, F, variance=DOWN)
    return theta, theta_star


def compose_J(omega: Tensor, spec: FrameSpec) -> Tensor:
    """The 1-form ``omega o J``."""
    return with_J(omega, 0, spec.J)


def potential_phi(conn: Connection, conn_twin: Connection, metric: MetricPair,
                  check: bool = True):
    """``Phi(x,y) = nabla~_x y - nabla_x y`` and ``Phi(x,y,z) = g(Phi(x,y),z)``."""
    phi12 = conn_twin - conn
    if check:
        _require("Phi(x,y) = Phi(y,x)", phi12 - phi12.permute((1, 0, 2)))
    return phi12, lower_index(phi12, 2, metric)


def phi_from_F(F: Tensor, spec: FrameSpec) -> Tensor:
    """``Phi(x,y,z) = 1/2 {F(Jz,x,y) - F(x,y,Jz) - F(y,x,Jz)}``."""
    FJ0 = with_J(F, 0, spec.J)
    FJ2 = with_J(F, 2, spec.J)
    total = (einsum("zxy->xyz", FJ0, variance=DOWN * 3) - FJ2
             - einsum("yxz->xyz", FJ2, variance=DOWN * 3))
    return total * Fraction(1, 2)


def F_from_phi(phi03: Tensor, spec: FrameSpec) -> Tensor:
    """``F(x,y,z) = Phi(x,y,Jz) + Phi(x,z,Jy)``."""
    PJ = with_J(phi03, 2, spec.J)
    return PJ + PJ.permute((0, 2, 1))


def f_forms(phi03: Tensor, metric: MetricPair, spec: FrameSpec):
    f = einsum("ij,ijz->z", metric.g_inv, phi03, variance=DOWN)
    f_star = einsum("ij,jm,imz->z", metric.g_inv, spec.J, phi03, variance=DOWN)
    return f, f_star


# -- Nijenhuis tensors ----------------------------------------------------------

def _bracket_tensor(spec: FrameSpec) -> Tensor:
    return spec.c


def _nijenhuis_like(B: Tensor, spec: FrameSpec) -> Tensor:
    """``B(Jx,Jy) - B(x,y) - J B(Jx,y) - J B(x,Jy)`` for a bilinear (1,2) map B."""
    J = spec.J
    BJ0 = with_J(B, 0, J)
    BJ1 = with_J(B, 1, J)
    return with_J(BJ0, 1, J) - B - with_J(BJ0, 2, J) - with_J(BJ1, 2, J)


def nijenhuis(spec: FrameSpec) -> Tensor:
    """``N(x,y) = [Jx,Jy] - [x,y] - J[Jx,y] - J[x,Jy]``."""
    return _nijenhuis_like(_bracket_tensor(spec), spec)


def associated_nijenhuis(conn: Connection, spec: FrameSpec) -> Tensor:
    """Same pattern as N with ``{x,y} = nabla_x y + nabla_y x`` for the bracket."""
    sym = conn.gamma + conn.gamma.permute((1, 0, 2))
    return _nijenhuis_like(sym, spec)


def nijenhuis_from_phi(phi03: Tensor, spec: FrameSpec) -> Tensor:
    """``2 Phi(z,Jx,Jy) - 2 Phi(z,x,y)`` arranged as [x, y, z]."""
    PJJ = with_J(with_J(phi03, 1, spec.J), 2, spec.J)
    return einsum("zxy->xyz", (PJJ - phi03) * 2, variance=DOWN * 3)


def associated_nijenhuis_from_phi(phi03: Tensor, spec: FrameSpec) -> Tensor:
    """``2 Phi(x,y,z) - 2 Phi(Jx,Jy,z)``."""
    return (phi03 - with_J(with_J(phi03, 0, spec.J), 1, spec.J)) * 2


# -- scalars and curvature corrections ------------------------------------------

def square_norm_nablaJ(F: Tensor, metric: MetricPair) -> Polynomial:
    """``g^{ij} g^{kl} g^{pq} F_{ikp} F_{jlq}``."""
    gi = metric.g_inv
    return einsum("ij,kl,pq,ikp,jlq->", gi, gi, gi, F, F, variance="").scalar()


def A_tensor(phi12: Tensor) -> Tensor:
    """``A(x,y)z = Phi(x, Phi(y,z)) - Phi(y, Phi(x,z))``, indexed [x, y, z, out]."""
    half = einsum("yzm,xmo->xyzo", phi12, phi12, variance="dddu")
    return half - half.permute((1, 0, 2, 3))


def Q_tensor(conn: Connection, phi12: Tensor) -> Tensor:
    """``(nabla_x Phi)(y,z) - (nabla_y Phi)(x,z) + A(x,y)z``."""
    dphi = covariant_derivative(conn, phi12)
    return dphi - dphi.permute((1, 0, 2, 3)) + A_tensor(phi12)


# -- classification --------------------------------------------------------------

def _w1_shape(one_form: Tensor, metric: MetricPair, spec: FrameSpec) -> Tensor:
    """``g(x,y) w(z) + g(x,Jy) w(Jz)``."""
    gt = twin_metric(spec, metric.g)
    wJ = compose_J(one_form, spec)
    return (einsum("xy,z->xyz", metric.g, one_form, variance=DOWN * 3)
            + einsum("xy,z->xyz", gt, wJ, variance=DOWN * 3))


def class_conditions(phi03: Tensor, f: Tensor, metric: MetricPair, spec: FrameSpec) -> dict:
    """Residual tensors whose vanishing defines each class."""
    n = spec.n
    phiJJ = with_J(with_J(phi03, 0, spec.J), 1, spec.J)
    shape = _w1_shape(f, metric, spec)
    return {
        ClassLabel.W0: [phi03],
        ClassLabel.W1: [phi03 - shape * Fraction(1, 2 * n)],
        ClassLabel.W2: [phi03 + phiJJ, f],
        ClassLabel.W3: [phi03 - phiJJ],
        ClassLabel.W1_W2: [phi03 + phiJJ],
        ClassLabel.W1_W3: [phi03 - phiJJ - shape * Fraction(1, n)],
        ClassLabel.W2_W3: [f],
        ClassLabel.W1_W2_W3: [],
    }


def F_class_conditions(F: Tensor, theta: Tensor, metric: MetricPair, spec: FrameSpec) -> dict:
    """The F-based definitions of the three basic classes (and W0)."""
    n = spec.n
    gt = twin_metric(spec, metric.g)
    thJ = compose_J(theta, spec)
    w1 = (einsum("xy,z->xyz", metric.g, theta, variance=DOWN * 3)
          + einsum("xy,z->xyz", gt, thJ, variance=DOWN * 3)
          + einsum("xz,y->xyz", metric.g, theta, variance=DOWN * 3)
          + einsum("xz,y->xyz", gt, thJ, variance=DOWN * 3))
    FJ = with_J(F, 2, spec.J)     # F(x, y, Jz)
    cyc_J = (FJ + einsum("yzx->xyz", FJ, variance=DOWN * 3)
             + einsum("zxy->xyz", FJ, variance=DOWN * 3))
    cyc = (F + einsum("yzx->xyz", F, variance=DOWN * 3)
           + einsum("zxy->xyz", F, variance=DOWN * 3))
    return {
        ClassLabel.W0: [F],
        ClassLabel.W1: [F - w1 * Fraction(1, 2 * n)],
        ClassLabel.W2: [cyc_J, theta],
        ClassLabel.W3: [cyc],
    }


_CLASS_ORDER = [ClassLabel.W0, ClassLabel.W1, ClassLabel.W2, ClassLabel.W3,
                ClassLabel.W1_W2, ClassLabel.W1_W3, ClassLabel.W2_W3, ClassLabel.W1_W2_W3]


def membership(conditions: dict) -> dict:
    return {label: all(t.is_zero() for t in ts) for label, ts in conditions.items()}


def classify(phi03: Tensor, f: Tensor, metric: MetricPair, spec: FrameSpec,
             F: Tensor | None = None, theta: Tensor | None = None) -> ClassLabel:
    """Smallest class, in containment order, whose defining identities all vanish.

    When F and theta are supplied the F-based definitions of W0..W3 are
    evaluated too and must agree with the Phi-based ones.
    """
    member = membership(class_conditions(phi03, f, metric, spec))
    if F is not None and theta is not None:
        other = membership(F_class_conditions(F, theta, metric, spec))
        for label, ok in other.items():
            if ok != member[label]:
                raise ConsistencyError(f"{label} membership by F vs by Phi")
    return next(label for label in _CLASS_ORDER if member[label])


# -- main-class closed forms ------------------------------------------------------

@dataclass(frozen=True)
class W1Specials:
    f_sharp: Tensor
    D: Connection
    p: Tensor
    h: Tensor
    Q: Tensor
    A: Tensor
    p0: Tensor = None
    Q_derived: Tensor = None


def _vector_J(v: Tensor, spec: FrameSpec) -> Tensor:
    return with_J(v, 0, spec.J)


def w1_specials(f: Tensor, metric: MetricPair, spec: FrameSpec, conn: Connection,
                phi03: Tensor | None = None) -> W1Specials:
    """Closed forms of D, Q, A valid on the main class, built from f alone."""
    if phi03 is not None:
        label = classify(phi03, f, metric, spec)
        if label not in (ClassLabel.W0, ClassLabel.W1):
            raise ClassMismatchError(f"closed forms need class W1, got {label}")
    n = spec.n
    J = spec.J
    g = metric.g
    gt = twin_metric(spec, g)
    fs = raise_index(f, 0, metric)
    Jfs = _vector_J(fs, spec)
    dim = spec.dim

    D = Connection(conn.gamma + (einsum("xy,k->xyk", g, fs, variance="ddu")
                                 + einsum("xy,k->xyk", gt, Jfs, variance="ddu"))
                   * Fraction(1, 4 * n))

    ident = Tensor.identity(dim)
    f_fs = einsum("k,k->", f, fs, variance="").scalar()
    f_Jfs = einsum("k,k->", f, Jfs, variance="").scalar()
    nabla_fs = einsum("xmk,m->xk", conn.gamma, fs, variance="du")
    p = nabla_fs + (einsum("x,k->xk", f, fs, variance="du")
                    - ident * f_fs - J * f_Jfs) * Fraction(1, 2 * n)

    fJ = compose_J(f, spec)
    h = einsum("x,k->xk", f, fs, variance="du") + einsum("x,k->xk", fJ, Jfs, variance="du")

    def curvature_shape(v: Tensor, v_of_J: Tensor) -> Tensor:
        # g(y,z) v(x) + g(y,Jz) v'(x) - g(x,z) v(y) - g(x,Jz) v'(y)
        half = (einsum("yz,xo->xyzo", g, v, variance="dddu")
                + einsum("yz,xo->xyzo", gt, v_of_J, variance="dddu"))
        return half - half.permute((1, 0, 2, 3))

    Jp = with_J(p, 1, J)           # J p(x)
    Q = curvature_shape(p, Jp) * Fraction(1, 2 * n)
    # Expanding nabla Phi directly gives the same J p(x) coefficient, but the
    # g(y,z) coefficient loses the f(f#)x and f(Jf#)Jx terms.
    p0 = nabla_fs + einsum("x,k->xk", f, fs, variance="du") * Fraction(1, 2 * n)
    Q_derived = curvature_shape(p0, Jp) * Fraction(1, 2 * n)
    hJ = with_J(h, 0, J)           # h(Jx)
    A = curvature_shape(h, hJ) * Fraction(1, 4 * n * n)
    return W1Specials(fs, D, p, h, Q, A, p0, Q_derived)


# -- bundle -------------------------------------------------------------------------

@dataclass(frozen=True)
class NordenObjects:
    """Everything derived from one choice of (metric, its connection, the other connection)."""
    metric: MetricPair
    conn: Connection
    conn_twin: Connection
    F: Tensor
    Phi12: Tensor
    Phi03: Tensor
    theta: Tensor
    theta_star: Tensor
    f: Tensor
    f_star: Tensor
    N12: Tensor
    N03: Tensor
    S12: Tensor
    S03: Tensor
    nablaJ_sqnorm: Polynomial
    R13: Tensor
    R04: Tensor
    ricci: Tensor
    scalar: Polynomial
    W: Tensor
    Q13: Tensor
    A13: Tensor
    D: Connection
    K13: Tensor
    P13: Tensor
    label: ClassLabel

    def lowered(self, t13: Tensor) -> Tensor:
        return lower_index(t13, 3, self.metric)


def norden_objects(spec: FrameSpec, metric: MetricPair, conn: Connection,
                   conn_twin: Connection, check: bool = True) -> NordenObjects:
    """Build all objects with ``metric``/``conn`` in the role of g/nabla.

    With ``check`` the construction-level identities are enforced and a
    violation raises ConsistencyError.
    """
    F = fundamental_F(conn, spec, metric, check=check)
    theta, theta_star = lee_forms(F, metric, spec)
    phi12, phi03 = potential_phi(conn, conn_twin, metric, check=check)
    f, f_star = f_forms(phi03, metric, spec)
    N12 = nijenhuis(spec)
    S12 = associated_nijenhuis(conn, spec)
    R13 = curvature(conn, spec)
    R04 = lowered_curvature(R13, metric)
    rho, tau = ricci_and_scalar(R04, metric)
    W = weyl(R04, metric) if spec.dim >= 4 else Tensor.zeros(spec.dim, DOWN * 4)
    A = A_tensor(phi12)
    Q = Q_tensor(conn, phi12)
    D = average(conn, conn_twin)
    K = curvature(D, spec)
    P = R13 + Q * Fraction(1, 2)
    if check:
        R13_twin = curvature(conn_twin, spec)
        _require("R~ = R + Q", R13 + Q - R13_twin)
        _require("P = (R + R~)/2", P - (R13 + R13_twin) * Fraction(1, 2))
        _require("K = R + Q/2 - A/4", K - (P - A * Fraction(1, 4)))
        _require("Phi from F", phi_from_F(F, spec) - phi03)
        _require("F from Phi", F_from_phi(phi03, spec) - F)
    label = classify(phi03, f, metric, spec, F=F if check else None,
                     theta=theta if check else None)
    return NordenObjects(
        metric=metric, conn=conn, conn_twin=conn_twin, F=F, Phi12=phi12, Phi03=phi03,
        theta=theta, theta_star=theta_star, f=f, f_star=f_star,
        N12=N12, N03=lower_index(N12, 2, metric), S12=S12, S03=lower_index(S12, 2, metric),
        nablaJ_sqnorm=square_norm_nablaJ(F, metric), R13=R13, R04=R04, ricci=rho,
        scalar=tau, W=W, Q13=Q, A13=A, D=D, K13=K, P13=P, label=label)


def exterior_lee_forms(obj: NordenObjects, spec: FrameSpec):
    return (exterior_derivative_1form(obj.theta, spec),
            exterior_derivative_1form(obj.theta_star, spec))
