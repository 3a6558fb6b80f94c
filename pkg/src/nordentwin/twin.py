"""The twin interchange: swapping (g, nabla) with (g~, nabla~).

Tilde objects are never written down from closed formulas. They come from
running the same constructors with the roles of the two metrics swapped;
the relations between plain and tilde objects are then checked as
polynomial identities.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import (Connection, FrameSpec, conformally_flat_form,
                       exterior_derivative_1form, levi_civita, twin_metric, validate_spec)
from .norden import ClassLabel, NordenObjects, norden_objects, with_J
from .scalars import Polynomial
from .tensor import DOWN, MetricPair, Tensor, einsum

INVARIANT = "invariant-verified"
ANTI_INVARIANT = "anti-invariant-verified"
RELATION = "relation-verified"
FAILED = "failed"


@dataclass(frozen=True)
class GeometryContext:
    spec: FrameSpec
    role_metric: MetricPair
    twin_metric_tensor: Tensor
    conn: Connection
    conn_twin: Connection
    objects: NordenObjects
    objects_twin: NordenObjects
    checked: bool = True


def build_context(spec: FrameSpec, check: bool = True, conn: Connection | None = None,
                  conn_twin: Connection | None = None) -> GeometryContext:
    """All objects for both metric roles.

    ``conn``/``conn_twin`` override the Levi-Civita connections (used for
    mutation testing, together with ``check=False``). The twin context's own
    partner connection is always recomputed from ``twin(g~) = -g``.
    """
    validate_spec(spec).raise_if_failed()
    metric = MetricPair.from_metric(spec.g)
    gt = twin_metric(spec)
    twin_pair = MetricPair.from_metric(gt)
    conn = levi_civita(spec, metric) if conn is None else conn
    conn_twin = levi_civita(spec, twin_pair) if conn_twin is None else conn_twin
    objects = norden_objects(spec, metric, conn, conn_twin, check=check)
    partner = levi_civita(spec, twin_metric(spec, gt))
    objects_twin = norden_objects(spec, twin_pair, conn_twin, partner, check=check)
    return GeometryContext(spec, metric, gt, conn, conn_twin, objects, objects_twin, check)


def twin_of(ctx: GeometryContext) -> GeometryContext:
    """The context with (g, nabla) and (g~, nabla~) exchanged."""
    gt = ctx.twin_metric_tensor
    spec = ctx.spec.with_metric(gt)
    pair = ctx.objects_twin.metric
    next_twin = twin_metric(spec, gt)
    next_pair = MetricPair.from_metric(next_twin)
    partner = ctx.objects_twin.conn_twin
    objects_twin = norden_objects(spec, next_pair, partner,
                                  levi_civita(spec, twin_metric(spec, next_twin)),
                                  check=ctx.checked)
    return GeometryContext(spec, pair, next_twin, ctx.conn_twin, partner,
                           ctx.objects_twin, objects_twin, ctx.checked)


# -- the suite ----------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    status: str
    anchor: str
    index: tuple | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAILED

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "anchor": self.anchor,
                "index": None if self.index is None else list(self.index),
                "detail": self.detail}

    def __str__(self):
        line = f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.status}"
        if not self.passed:
            line += f" -- {self.detail}"
            if self.index is not None:
                line += f" at {self.index}"
        return line


@dataclass
class InvarianceReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"passed": sum(c.passed for c in self.checks), "total": len(self.checks),
                "checks": [c.to_dict() for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def __str__(self):
        lines = [str(c) for c in self.checks]
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _compare(pairs, status: str):
    """First mismatch over (label, lhs, rhs) triples as (detail, 1-based index)."""
    for label, lhs, rhs in pairs:
        if isinstance(lhs, Tensor):
            idx = lhs.first_difference(rhs)
            if idx is not None:
                return FAILED, label, tuple(i + 1 for i in idx)
        elif lhs != rhs:
            return FAILED, label, None
    return status, "", None


def _check(name, anchor, status, pairs) -> CheckResult:
    st, detail, idx = _compare(pairs, status)
    return CheckResult(name, st, anchor, idx, detail)


def _tilde_F_formula(F: Tensor, J: Tensor) -> Tensor:
    """``1/2 {F(Jy,z,x) - F(y,Jz,x) + F(Jz,y,x) - F(z,Jy,x)}`` as [x, y, z]."""
    FJ0 = with_J(F, 0, J)
    FJ1 = with_J(F, 1, J)
    v = DOWN * 3
    return (einsum("yzx->xyz", FJ0, variance=v) - einsum("yzx->xyz", FJ1, variance=v)
            + einsum("zyx->xyz", FJ0, variance=v) - einsum("zyx->xyz", FJ1, variance=v)
            ) * Fraction(1, 2)


def invariance_suite(ctx: GeometryContext) -> InvarianceReport:
    o, t = ctx.objects, ctx.objects_twin
    J = ctx.spec.J
    half, quarter = Fraction(1, 2), Fraction(1, 4)
    checks = [
        _check("potential", "Phi~(x,y) = -Phi(x,y); Phi~(x,y,z) = -Phi(x,y,Jz)",
               ANTI_INVARIANT,
               [("Phi~(x,y) = -Phi(x,y)", t.Phi12, -o.Phi12),
                ("Phi~(x,y,z) = -Phi(x,y,Jz)", t.Phi03, -with_J(o.Phi03, 2, J))]),
        _check("fundamental tensor",
               "F~(x,y,z) = 1/2{F(Jy,z,x) - F(y,Jz,x) + F(Jz,y,x) - F(z,Jy,x)}",
               RELATION, [("F~ relation", t.F, _tilde_F_formula(o.F, J))]),
        _check("f-forms", "f~ = f, f~* = f*", INVARIANT,
               [("f~ = f", t.f, o.f), ("f~* = f*", t.f_star, o.f_star)]),
        _check("Lee forms", "theta~ = theta, theta~* = theta*", INVARIANT,
               [("theta~ = theta", t.theta, o.theta),
                ("theta~* = theta*", t.theta_star, o.theta_star)]),
        _check("class", "class(M,J,g~) = class(M,J,g)", INVARIANT,
               [(f"class {t.label} vs {o.label}", t.label, o.label)]),
        _check("average connection", "D~ = D", INVARIANT,
               [("D~ = D", t.D.gamma, o.D.gamma)]),
        _check("Nijenhuis tensor", "N~(x,y) = N(x,y); N~(x,y,z) = N(x,y,Jz)", INVARIANT,
               [("N~(x,y) = N(x,y)", t.N12, o.N12),
                ("N~(x,y,z) = N(x,y,Jz)", t.N03, with_J(o.N03, 2, J))]),
        _check("associated Nijenhuis tensor",
               "S~(x,y) = -S(x,y); S~(x,y,z) = -S(x,y,Jz)", ANTI_INVARIANT,
               [("S~(x,y) = -S(x,y)", t.S12, -o.S12),
                ("S~(x,y,z) = -S(x,y,Jz)", t.S03, -with_J(o.S03, 2, J))]),
        _check("A tensor", "A~ = A", INVARIANT, [("A~ = A", t.A13, o.A13)]),
        _check("Q tensor", "Q~ = -Q", ANTI_INVARIANT, [("Q~ = -Q", t.Q13, -o.Q13)]),
        _check("curvature of D", "K~ = R~ + Q~/2 - A~/4 = K", INVARIANT,
               [("R~ + Q~/2 - A~/4 = K", t.R13 + t.Q13 * half - t.A13 * quarter, o.K13),
                ("K~ = K", t.K13, o.K13)]),
        _check("average curvature", "P~ = P", INVARIANT, [("P~ = P", t.P13, o.P13)]),
        _check("vanishing criteria",
               "K = 0 iff R = -Q/2 + A/4; P = 0 iff R = -Q/2", RELATION,
               [("K = R + Q/2 - A/4", o.K13, o.R13 + o.Q13 * half - o.A13 * quarter),
                ("P = R + Q/2", o.P13, o.R13 + o.Q13 * half),
                ("K~ = R~ + Q~/2 - A~/4", t.K13, t.R13 + t.Q13 * half - t.A13 * quarter),
                ("P~ = R~ + Q~/2", t.P13, t.R13 + t.Q13 * half)]),
    ]
    return InvarianceReport(checks)


def corollary1_check(ctx: GeometryContext) -> bool:
    """If the average connection vanishes, both connections and Phi vanish and
    the class is W0; vacuously true otherwise."""
    o = ctx.objects
    if not o.D.gamma.is_zero():
        return True
    return (ctx.conn.gamma.is_zero() and ctx.conn_twin.gamma.is_zero()
            and o.Phi12.is_zero() and o.label == ClassLabel.W0
            and ctx.objects_twin.label == ClassLabel.W0)


# -- criteria for the example family ---------------------------------------------------

def reduced_conditions(values) -> list:
    """Distinct primitive forms of the nonzero polynomials among ``values``."""
    seen = {}
    for p in values:
        if p.terms:
            q = p.primitive()
            seen.setdefault(str(q), q)
    return [seen[k] for k in sorted(seen)]


@dataclass
class Theorem3Report:
    dtheta: Tensor
    dtheta_star: Tensor
    lee_closed: bool
    lee_conditions: list
    weyl_zero: bool
    weyl_twin_zero: bool
    conformal_form: bool
    conformal_form_twin: bool
    scalar: Polynomial
    scalar_twin: Polynomial
    norm: Polynomial
    norm_twin: Polynomial
    conditions_g: list
    conditions_twin: list

    @property
    def criterion_i(self) -> bool:
        return self.lee_closed

    @property
    def criterion_ii(self) -> bool:
        return (self.weyl_zero and self.weyl_twin_zero and self.conformal_form
                and self.conformal_form_twin)

    @property
    def criterion_iii(self) -> tuple:
        return (not self.scalar.terms and not self.norm.terms,
                not self.scalar_twin.terms and not self.norm_twin.terms)

    def to_dict(self) -> dict:
        return {
            "i": {"lee_forms_closed": self.lee_closed,
                  "conditions": [str(p) for p in self.lee_conditions]},
            "ii": {"weyl_zero": self.weyl_zero, "weyl_twin_zero": self.weyl_twin_zero,
                   "R_conformally_flat_form": self.conformal_form,
                   "R_twin_conformally_flat_form": self.conformal_form_twin},
            "iii": {"g": {"scalar_curvature": str(self.scalar),
                          "nablaJ_square_norm": str(self.norm),
                          "scalar_flat_and_isotropic": self.criterion_iii[0],
                          "conditions": [str(p) for p in self.conditions_g]},
                    "g_twin": {"scalar_curvature": str(self.scalar_twin),
                               "nablaJ_square_norm": str(self.norm_twin),
                               "scalar_flat_and_isotropic": self.criterion_iii[1],
                               "conditions": [str(p) for p in self.conditions_twin]}},
        }

    def __str__(self):
        def conds(ps):
            return ", ".join(f"{p} = 0" for p in ps) if ps else "none (holds identically)"

        iii = self.criterion_iii
        return "\n".join([
            f"(i)   locally conformal Kaehler (d theta = d theta* = 0): "
            f"{'yes' if self.lee_closed else 'no'}",
            f"      conditions: {conds(self.lee_conditions)}",
            f"(ii)  W = 0: {self.weyl_zero}, W~ = 0: {self.weyl_twin_zero}, "
            f"R and R~ in conformally flat form: {self.conformal_form and self.conformal_form_twin}",
            f"(iii) g:  tau = {self.scalar}, |nabla J|^2 = {self.norm}; "
            f"scalar flat and isotropic: {'yes' if iii[0] else 'no'}",
            f"      conditions: {conds(self.conditions_g)}",
            f"      g~: tau~ = {self.scalar_twin}, |nabla~ J|^2 = {self.norm_twin}; "
            f"scalar flat and isotropic: {'yes' if iii[1] else 'no'}",
            f"      conditions: {conds(self.conditions_twin)}",
        ])


def theorem3_criteria(ctx: GeometryContext) -> Theorem3Report:
    o, t = ctx.objects, ctx.objects_twin
    spec = ctx.spec
    dth = exterior_derivative_1form(o.theta, spec)
    dths = exterior_derivative_1form(o.theta_star, spec)
    lee = reduced_conditions(list(dth.components.reshape(-1))
                             + list(dths.components.reshape(-1)))
    return Theorem3Report(
        dtheta=dth, dtheta_star=dths,
        lee_closed=dth.is_zero() and dths.is_zero(), lee_conditions=lee,
        weyl_zero=o.W.is_zero(), weyl_twin_zero=t.W.is_zero(),
        conformal_form=o.R04 == conformally_flat_form(o.metric, o.ricci, o.scalar),
        conformal_form_twin=t.R04 == conformally_flat_form(t.metric, t.ricci, t.scalar),
        scalar=o.scalar, scalar_twin=t.scalar,
        norm=o.nablaJ_sqnorm, norm_twin=t.nablaJ_sqnorm,
        conditions_g=reduced_conditions([o.scalar, o.nablaJ_sqnorm]),
        conditions_twin=reduced_conditions([t.scalar, t.nablaJ_sqnorm]),
    )
