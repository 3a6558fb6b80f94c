import random

import numpy as np
import pytest

from nordentwin.errors import UnsupportedDimensionError, ValidationError
from nordentwin.geometry import (FrameSpec, covariant_derivative, curvature, curvature_like_check,
                                 curvature_like_violation, exterior_derivative_1form,
                                 kulkarni_nomizu, levi_civita, lowered_curvature,
                                 ricci_and_scalar, twin_metric, validate_spec, weyl)
from nordentwin.scalars import parse_polynomial
from nordentwin.spec_io import EXAMPLE_PARAMS, builtin_example
from nordentwin.tensor import MetricPair, Tensor, einsum

from randspecs import random_spec

EX = builtin_example()
G = MetricPair.from_metric(EX.g)


def poly(text):
    return parse_polynomial(text, EXAMPLE_PARAMS)


def test_example_validates_and_J_is_abelian():
    assert validate_spec(EX).ok
    c, J = EX.c.components, EX.J.components
    # [JX_i, JX_j] = [X_i, X_j]
    lhs = np.einsum("ia,jb,abk->ijk", J, J, c, dtype=object)
    assert Tensor(4, "ddu", lhs) == EX.c


def test_identity_J_fails_at_first_entry():
    spec = FrameSpec(4, (), Tensor.zeros(4, "ddu"), Tensor.identity(4),
                     Tensor(4, "dd", np.diag([1, 1, -1, -1]).astype(object)))
    bad = validate_spec(spec).first_failure()
    assert bad.name == "J^2 = -I" and bad.index == (0, 0)
    with pytest.raises(ValidationError, match=r"J\^2 = -I fails at \(1, 1\)"):
        validate_spec(spec).raise_if_failed()


def test_positive_definite_g_breaks_the_norden_condition():
    spec = EX.with_metric(Tensor(4, "dd", np.eye(4, dtype=int).astype(object)))
    bad = validate_spec(spec).first_failure()
    assert bad.name.startswith("Norden condition")


def test_jacobi_violation_is_located():
    c = np.zeros((4, 4, 4), dtype=int)
    # [X1,X2] = X3, [X2,X3] = X1, [X1,X3] = X1: not a Lie algebra
    for i, j, k in [(0, 1, 2), (1, 2, 0), (0, 2, 0)]:
        c[i, j, k], c[j, i, k] = 1, -1
    spec = FrameSpec(4, (), Tensor(4, "ddu", c.astype(object)), EX.J, EX.g)
    bad = validate_spec(spec).first_failure()
    assert bad.name == "Jacobi identity" and bad.index is not None


def test_twin_metric_twice_is_minus_g():
    gt = twin_metric(EX)
    assert gt[0, 2] == -1 and gt[1, 3] == -1
    assert twin_metric(EX, gt) == -EX.g


def test_levi_civita_entries():
    conn = levi_civita(EX, G)
    assert conn.apply(0, 0) == [0, 0, poly("l2"), poly("l1")]
    tconn = levi_civita(EX, twin_metric(EX))
    assert tconn.apply(0, 0) == [poly("-l4"), poly("-l3"), 0, 0]
    flat = EX.substitute({v: 0 for v in EXAMPLE_PARAMS})
    assert levi_civita(flat, G).gamma.is_zero()


def test_torsion_free_and_metric_compatible():
    for metric in (G, MetricPair.from_metric(twin_metric(EX))):
        conn = levi_civita(EX, metric)
        assert conn.is_torsion_free(EX)
        assert covariant_derivative(conn, metric.g).is_zero()


def test_kulkarni_nomizu_oracle():
    g = EX.g
    gg = kulkarni_nomizu(g, g)
    # g(x,z)g(y,w) - g(y,z)g(x,w) + g(y,w)g(x,z) - g(x,w)g(y,z) at (1,2,2,1)
    assert gg[0, 1, 1, 0] == -2
    assert curvature_like_check(gg)
    a = Tensor(4, "dd", [[1, 2, 0, 0], [2, 0, 1, 0], [0, 1, 3, 0], [0, 0, 0, 1]])
    assert kulkarni_nomizu(a, g) == kulkarni_nomizu(g, a)


def test_curvature_of_example():
    R = lowered_curvature(curvature(levi_civita(EX, G), EX), G)
    assert R[0, 1, 1, 0] == poly("l1^2 + l2^2")
    assert curvature_like_check(R)
    rho, tau = ricci_and_scalar(R, G)
    assert rho[0, 0] == poly("2*l1^2 + 2*l2^2 - 2*l4^2")
    assert tau == poly("6*l1^2 + 6*l2^2 - 6*l3^2 - 6*l4^2")
    assert weyl(R, G).is_zero()


def test_curvature_like_check_rejects_bad_tensors():
    t = np.zeros((4,) * 4, dtype=int)
    t[0, 1, 2, 3] = 1
    v = curvature_like_violation(Tensor(4, "dddd", t.astype(object)))
    assert v is not None
    assert curvature_like_check(Tensor.zeros(4, "dddd"))


def test_weyl_needs_dimension_four():
    g2 = MetricPair.from_metric(Tensor(2, "dd", [[1, 0], [0, -1]]))
    with pytest.raises(UnsupportedDimensionError):
        weyl(Tensor.zeros(2, "dddd"), g2)


def test_exterior_derivative_of_zero_and_antisymmetry():
    assert exterior_derivative_1form(Tensor.zeros(4, "d"), EX).is_zero()
    om = Tensor(4, "d", [poly("l1"), 1, 0, poly("l3")])
    d = exterior_derivative_1form(om, EX)
    assert d == -d.permute((1, 0))


def test_random_specs_levi_civita_properties():
    rng = random.Random(7)
    for _ in range(10):
        spec = random_spec(rng)
        metric = MetricPair.from_metric(spec.g)
        conn = levi_civita(spec, metric)
        assert conn.is_torsion_free(spec)
        assert covariant_derivative(conn, spec.g).is_zero()
        R = lowered_curvature(curvature(conn, spec), metric)
        assert curvature_like_check(R)
        rho, _ = ricci_and_scalar(R, metric)
        assert rho == rho.permute((1, 0))
        W = weyl(R, metric)
        assert einsum("ij,iyzj->yz", metric.g_inv, W, variance="dd").is_zero()
