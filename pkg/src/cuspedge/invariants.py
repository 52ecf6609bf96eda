"""Cuspidal edge invariants kappa_s, kappa_nu, kappa_c, kappa_t along the singular curve."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import jets as J
from .errors import NotCuspidalEdgeError, UnboundedCurvatureError
from .frontal import curvatures_at
from .jets import Jet1
from .numerics import derivative_richardson, richardson
from .singular import (
    AdaptedChart,
    SingularCurve,
    analyze_point,
    build_adapted_chart,
    build_special_adapted_chart,
    curve_jets,
)
from .tolerances import DEFAULT, Tolerances


@dataclass
class EdgeInvariants:
    t: float
    u: float
    v: float
    kappa_s: float
    kappa_nu: float
    kappa_c: float
    kappa_t: float
    kappa_nu_p: Optional[float] = None
    kappa_t_p: Optional[float] = None
    speed: float = 1.0                     # |d f(gamma) / dt|
    flags: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("t", "u", "v", "kappa_s", "kappa_nu", "kappa_c", "kappa_t",
                 "kappa_nu_p", "kappa_t_p")}


@dataclass
class InvariantJets:
    """Invariants as jets in the chart's axis parameter."""

    kappa_s: Jet1
    kappa_nu: Jet1
    kappa_c: Jet1
    kappa_t: Jet1
    speed: Jet1
    sign_lambda_v: float


def invariant_jets(chart: AdaptedChart, tol: Tolerances = DEFAULT) -> InvariantJets:
    F = chart.F
    fu = F.deriv(1, 0).axis()
    fuu = F.deriv(2, 0).axis()
    fvv = F.deriv(0, 2).axis()
    fvvv = F.deriv(0, 3).axis()
    fuvv = F.deriv(1, 2).axis()
    nu = chart.nu.axis()
    lam_v = float(np.linalg.det(np.array([fu.value, fvv.value, nu.value])))
    if abs(lam_v) <= tol.tau_sing:
        raise NotCuspidalEdgeError(f"lambda_v = {lam_v:.3e} on the axis")
    sgn = 1.0 if lam_v > 0 else -1.0
    speed = J.norm(fu)
    cr = J.cross(fu, fvv)
    crn2 = J.dot(cr, cr)
    if crn2.value <= tol.tau_reg ** 2:
        raise NotCuspidalEdgeError("|f_u x f_vv| vanishes: not a cuspidal edge")
    fu2 = J.dot(fu, fu)
    kappa_s = J.det3(fu, fuu, nu) * sgn / (speed * fu2)
    kappa_nu = J.dot(fuu, nu) / fu2
    kappa_c = J.apply("pow_const", fu2, 0.75) * J.det3(fu, fvv, fvvv) / J.apply("pow_const", crn2, 1.25)
    kappa_t = (J.det3(fu, fvv, fuvv) - J.dot(fu, fvv) * J.det3(fu, fvv, fuu) / fu2) / crn2
    return InvariantJets(kappa_s, kappa_nu, kappa_c, kappa_t, speed, sgn)


def invariants_from_chart(chart: AdaptedChart, t: float = 0.0,
                          tol: Tolerances = DEFAULT) -> EdgeInvariants:
    ij = invariant_jets(chart, tol)
    speed = ij.speed.value
    inv = EdgeInvariants(
        t, chart.point.u, chart.point.v,
        ij.kappa_s.value, ij.kappa_nu.value, ij.kappa_c.value, ij.kappa_t.value,
        speed=speed,
    )
    # derivatives with respect to arclength of the image curve
    if ij.kappa_nu.order >= 1:
        inv.kappa_nu_p = ij.kappa_nu.coef(1) / speed
    if ij.kappa_t.order >= 1:
        inv.kappa_t_p = ij.kappa_t.coef(1) / speed
    return inv


def invariants_at(curve: SingularCurve, t: float, tol: Optional[Tolerances] = None) -> EdgeInvariants:
    """Invariants at curve parameter ``t``, in the rigid adapted chart there.

    ``kappa_nu_p`` and ``kappa_t_p`` are filled from the jets; use
    :func:`invariant_derivatives` for the finite-difference values.
    """
    tol = tol or curve.tol
    point, t = curve.point_at(t)
    chart = build_adapted_chart(curve.surface, point, curve.order, t, tol)
    return invariants_from_chart(chart, t, tol)


def offset_points(curve: SingularCurve, t: float, deltas, tol: Optional[Tolerances] = None):
    """Curve points at arclength offsets ``deltas`` from ``t`` via one set of jets."""
    tol = tol or curve.tol
    base, t = curve.point_at(t)
    U, V = curve_jets(curve.surface, base, curve.order + 2, tol)
    out = []
    for d in deltas:
        if d == 0.0:
            out.append(base)
            continue
        out.append(analyze_point(curve.surface, U.evaluate(d), V.evaluate(d),
                                 nu_ref=base.nu, tol=tol))
    return base, t, out


@dataclass
class DerivativeResult:
    kappa_nu_p: float
    kappa_t_p: float
    kappa_nu_p_jet: float
    kappa_t_p_jet: float
    error_estimate: float
    one_sided: int = 0

    @property
    def flags(self) -> list:
        return ["one_sided_stencil"] if self.one_sided else []


def invariant_derivatives(curve: SingularCurve, t: float, h0: float = 1e-2, levels: int = 2,
                          tol: Optional[Tolerances] = None) -> DerivativeResult:
    """kappa_nu' and kappa_t' with respect to arclength of the image curve.

    Primary values come from fourth-order finite differences of pointwise
    invariants (with Richardson extrapolation); the jet values are kept as a
    cross-check.
    """
    tol = tol or curve.tol
    lo, hi = curve.extent()
    reach = 4 * h0
    one_sided = 0
    if t - reach < lo and t + reach <= hi:
        one_sided = 1
    elif t + reach > hi and t - reach >= lo:
        one_sided = -1
    steps = [h0 / 2 ** k for k in range(levels)]
    if one_sided:
        deltas = sorted({one_sided * j * h for h in steps for j in range(5)})
    else:
        deltas = sorted({j * h for h in steps for j in (-2, -1, 0, 1, 2)})
    base, t, pts = offset_points(curve, t, deltas, tol)
    values = {}
    for d, p in zip(deltas, pts):
        ch = build_adapted_chart(curve.surface, p, curve.order, t + d, tol)
        ij = invariant_jets(ch, tol)
        values[round(d, 15)] = (ij.kappa_nu.value, ij.kappa_t.value)
    center = build_adapted_chart(curve.surface, base, curve.order, t, tol)
    inv = invariants_from_chart(center, t, tol)

    def component(k):
        return lambda x: values[round(x - t, 15)][k]

    res = []
    err = 0.0
    for k in (0, 1):
        d, e = derivative_richardson(component(k), t, h0, levels, one_sided)
        res.append(d / inv.speed)
        err = max(err, e / inv.speed)
    return DerivativeResult(res[0], res[1], inv.kappa_nu_p, inv.kappa_t_p, err, one_sided)


def curve_invariants(curve: SingularCurve, tol: Optional[Tolerances] = None) -> list[EdgeInvariants]:
    """Invariants at every traced sample (derivatives from jets)."""
    tol = tol or curve.tol
    out = []
    for t, smp in zip(curve.t, curve.samples):
        try:
            ch = build_adapted_chart(curve.surface, smp, curve.order, float(t), tol)
            out.append(invariants_from_chart(ch, float(t), tol))
        except NotCuspidalEdgeError:
            inv = EdgeInvariants(float(t), smp.u, smp.v, *(float("nan"),) * 4)
            inv.flags.append("not_cuspidal_edge")
            out.append(inv)
    return out


def is_bounded_K(curve: SingularCurve, invariants: Optional[list] = None,
                 tol: Optional[Tolerances] = None) -> tuple[bool, float]:
    """True iff kappa_nu vanishes (to tau_bound) at every sample."""
    tol = tol or curve.tol
    invs = invariants if invariants is not None else curve_invariants(curve, tol)
    vals = [abs(i.kappa_nu) for i in invs if np.isfinite(i.kappa_nu)]
    worst = max(vals) if vals else float("nan")
    return bool(vals) and worst < tol.tau_bound, worst


def is_curvature_line(curve: SingularCurve, invariants: Optional[list] = None,
                      tol: Optional[Tolerances] = None) -> tuple[bool, float]:
    """True iff kappa_t vanishes (to tau_bound) at every sample."""
    tol = tol or curve.tol
    invs = invariants if invariants is not None else curve_invariants(curve, tol)
    vals = [abs(i.kappa_t) for i in invs if np.isfinite(i.kappa_t)]
    worst = max(vals) if vals else float("nan")
    return bool(vals) and worst < tol.tau_bound, worst


@dataclass
class LimitCurvature:
    closed_form: float
    numeric: float
    error_estimate: float

    @property
    def discrepancy(self) -> float:
        return abs(self.closed_form - self.numeric)


def numeric_K_limit(surface, chart: AdaptedChart, sigma0: float = 1e-2, levels: int = 4,
                    tol: Tolerances = DEFAULT) -> tuple[float, float]:
    """lim K = Lambda / lambda along the transversal line of ``chart``, both sides."""
    vals = []
    for k in range(levels):
        s = sigma0 / 2 ** k
        ks = []
        for sgn in (1.0, -1.0):
            u, v = chart.map(0.0, sgn * s)
            smp = curvatures_at(surface, u, v, reference=chart.point.nu, tol=tol)
            if smp.K is None:
                raise UnboundedCurvatureError(f"probe ({u}, {v}) is singular")
            ks.append(smp.K)
        vals.append(0.5 * (ks[0] + ks[1]))
    return richardson(vals)


def limit_gaussian_curvature(curve: SingularCurve, t: float,
                             tol: Optional[Tolerances] = None) -> LimitCurvature:
    """-(4 kappa_t^2 + kappa_s kappa_c^2)/4 in a special adapted chart, and the numeric limit."""
    tol = tol or curve.tol
    point, t = curve.point_at(t)
    chart = build_special_adapted_chart(curve.surface, point, curve.order, t, tol)
    inv = invariants_from_chart(chart, t, tol)
    if abs(inv.kappa_nu) > tol.tau_bound:
        raise UnboundedCurvatureError(f"kappa_nu = {inv.kappa_nu:.3e}: K is unbounded")
    closed = -(4 * inv.kappa_t ** 2 + inv.kappa_s * inv.kappa_c ** 2) / 4
    num, err = numeric_K_limit(curve.surface, chart, tol=tol)
    return LimitCurvature(closed, num, err)
