"""Singular curve of a frontal: detection, tracing, null directions and charts.

Conventions
-----------
* ``lambda`` is computed as ``lambda_m = det(f_u, f_v, m)`` with ``m`` the unit
  normal at a nearby singular point.  Since ``f_u x f_v = lambda nu`` this
  equals ``lambda <nu, m>``: same zero set, same gradient on the curve.
* The traced direction ``T = rot90_cw(grad lambda)`` keeps ``lambda > 0`` on
  the left.  The global sign of ``nu`` is fixed at the seed so that ``T`` has
  a positive dominant component, then flipped by the co-orientation.
* Curve jets are parametrized by parameter-space arclength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from . import jets as J
from .errors import (
    AxisVanishingError,
    ChartError,
    CorankTwoError,
    NotCuspidalEdgeError,
    TraceError,
)
from .frontal import adapted_unit_normal
from .jets import Jet1, Jet2, JetVec3
from .numerics import rot90_ccw, rot90_cw, unit
from .tolerances import DEFAULT, Tolerances


# -- pointwise primitives -----------------------------------------------------


def jacobian(surface, u: float, v: float) -> np.ndarray:
    f = surface.jet(u, v, 1)
    return np.column_stack([f.partial(1, 0), f.partial(0, 1)])


def null_frame(surface, u: float, v: float, tol: Tolerances = DEFAULT):
    """Right singular vectors (xi, eta) of df, positively oriented, and singular values."""
    jac = jacobian(surface, u, v)
    _, svals, vt = np.linalg.svd(jac)
    xi, eta = vt[0], vt[1]
    if xi[np.argmax(np.abs(xi))] < 0:
        xi = -xi
    if xi[0] * eta[1] - xi[1] * eta[0] < 0:
        eta = -eta
    if svals[0] <= tol.tau_reg:
        raise CorankTwoError(f"df vanishes at ({u}, {v}): corank 2 is unsupported")
    return xi, eta, svals


def _line_chart(surface, u, v, xi, eta, order):
    """f(q + a xi + b eta) as a jet in (a, b)."""
    a = Jet2.variable(0, 0.0, order)
    b = Jet2.variable(1, 0.0, order)
    U = a * float(xi[0]) + b * float(eta[0]) + u
    V = a * float(xi[1]) + b * float(eta[1]) + v
    return surface.pullback(U, V)


def normal_on_null_line(surface, u, v, xi, eta, order: int = 3) -> JetVec3:
    """Jet in b of nu(q + b eta) = normalize(f_xi x h) with f_eta = b h."""
    F = _line_chart(surface, u, v, xi, eta, order)
    Fa = F.deriv(1, 0).transversal()
    Fb = F.deriv(0, 1).transversal()
    Fb = Fb.map(lambda c: Jet1(np.concatenate([[0.0], c.coeffs[1:]]), c.order))
    h = Fb.map(lambda c: c.divide_by_t(math.inf))
    return J.normalize(J.cross(Fa, h))


def lambda_jet(surface, u: float, v: float, m, order: int) -> Jet2:
    """lambda_m = det(f_u, f_v, m) for a fixed unit vector m."""
    f = surface.jet(u, v, order + 1)
    mm = JetVec3.constant(m, f.x.truncate(order))
    return J.det3(f.deriv(1, 0), f.deriv(0, 1), mm)


def lambda_value_grad(surface, u, v, m) -> tuple[float, np.ndarray]:
    lam = lambda_jet(surface, u, v, m, 1)
    return lam.value, np.array([lam.coef(1, 0), lam.coef(0, 1)])


def polish(surface, u: float, v: float, m, tol: Tolerances = DEFAULT, maxiter: int = 30):
    """Newton projection onto lambda_m = 0 along the gradient."""
    q = np.array([u, v], dtype=float)
    for _ in range(maxiter):
        lam, g = lambda_value_grad(surface, q[0], q[1], m)
        gg = float(g @ g)
        if gg == 0.0:
            raise TraceError(f"grad lambda vanishes at ({q[0]}, {q[1]})")
        dq = -lam / gg * g
        q = q + dq
        if abs(lam) <= tol.tau_sing * 1e-3 or np.linalg.norm(dq) <= 1e-15 * (1 + np.linalg.norm(q)):
            break
    lam, g = lambda_value_grad(surface, q[0], q[1], m)
    return q, lam, g


# -- samples ------------------------------------------------------------------


@dataclass
class SingularPointSample:
    u: float
    v: float
    grad: np.ndarray            # grad lambda
    eta: np.ndarray             # unit null vector with eta lambda > 0
    xi: np.ndarray
    nu: np.ndarray              # unit normal at the point
    lam: float                  # residual lambda after polishing
    eta_lambda: float
    front_measure: float        # |d nu (eta)|
    sigma: np.ndarray           # singular values of df

    @property
    def location(self) -> tuple[float, float]:
        return (self.u, self.v)

    @property
    def tangent(self) -> np.ndarray:
        return unit(rot90_cw(self.grad))

    def is_front(self, tol: Tolerances = DEFAULT) -> bool:
        return self.front_measure > tol.tau_front

    def criterion_measure(self) -> float:
        return abs(self.eta_lambda) / (float(np.linalg.norm(self.grad)) * float(np.linalg.norm(self.eta)))

    def is_cuspidal_edge(self, tol: Tolerances = DEFAULT) -> bool:
        return self.is_front(tol) and self.criterion_measure() > tol.tau_crit

    def evidence(self, tol: Tolerances = DEFAULT) -> dict:
        return {"is_front": self.is_front(tol), "eta_lambda": self.eta_lambda,
                "front_measure": self.front_measure,
                "is_cuspidal_edge": self.is_cuspidal_edge(tol)}


def analyze_point(surface, u: float, v: float, nu_ref=None,
                  tol: Tolerances = DEFAULT, polish_point: bool = True) -> SingularPointSample:
    """Polish onto the singular set and collect the local frame.

    ``nu_ref`` selects the sign of nu by continuity; without it the canonical
    seed convention is applied.
    """
    if polish_point:
        if nu_ref is None:
            xi, eta, _ = null_frame(surface, u, v, tol)
            m = normal_on_null_line(surface, u, v, xi, eta, 2).value
        else:
            m = nu_ref
        q, _, _ = polish(surface, u, v, m, tol)
        u, v = float(q[0]), float(q[1])
    xi, eta, svals = null_frame(surface, u, v, tol)
    nuj = normal_on_null_line(surface, u, v, xi, eta, 3)
    nu = nuj.value
    if nu_ref is not None:
        if float(nu @ nu_ref) < 0:
            nu = -nu
    else:
        lam0, g0 = lambda_value_grad(surface, u, v, nu)
        T = rot90_cw(g0)
        if T[int(np.argmax(np.abs(T)))] < 0:
            nu = -nu
        if surface.co_orientation < 0:
            nu = -nu
    lam, g = lambda_value_grad(surface, u, v, nu)
    if float(eta @ g) < 0:
        eta = -eta
    front = float(np.linalg.norm(nuj.coef(1)))
    return SingularPointSample(u, v, g, eta, xi, nu, lam, float(eta @ g), front, svals)


def null_direction(surface, u: float, v: float, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Unit kernel direction of df (smallest right singular vector)."""
    xi, eta, svals = null_frame(surface, u, v, tol)
    return eta


def is_cuspidal_edge(sample: SingularPointSample, tol: Tolerances = DEFAULT) -> tuple[bool, dict]:
    return sample.is_cuspidal_edge(tol), sample.evidence(tol)


# -- detection ----------------------------------------------------------------


def _raw_normals(surface, uu: np.ndarray, vv: np.ndarray) -> np.ndarray:
    du = 1e-6 * (surface.u_range[1] - surface.u_range[0])
    dv = 1e-6 * (surface.v_range[1] - surface.v_range[0])
    fu = (surface.grid(uu + du, vv) - surface.grid(uu - du, vv)) / (2 * du)
    fv = (surface.grid(uu, vv + dv) - surface.grid(uu, vv - dv)) / (2 * dv)
    return np.cross(fu, fv)


def locate_singular_points(surface, grid_resolution: int = 64,
                           tol: Tolerances = DEFAULT) -> list[SingularPointSample]:
    """Sign-change scan of lambda on a cell-centred grid plus 1-D root polishing."""
    n = int(grid_resolution)
    (u0, u1), (v0, v1) = surface.u_range, surface.v_range
    us = u0 + (np.arange(n) + 0.5) * (u1 - u0) / n
    vs = v0 + (np.arange(n) + 0.5) * (v1 - v0) / n
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    N = _raw_normals(surface, uu, vv)
    ok = np.all(np.isfinite(N), axis=-1)
    edges = []
    for axis in (0, 1):
        a = N[:-1, :] if axis == 0 else N[:, :-1]
        b = N[1:, :] if axis == 0 else N[:, 1:]
        oka = ok[:-1, :] & ok[1:, :] if axis == 0 else ok[:, :-1] & ok[:, 1:]
        flips = (np.einsum("ijk,ijk->ij", a, b) < 0) & oka
        for i, j in zip(*np.nonzero(flips)):
            p = (uu[i, j], vv[i, j])
            q = (uu[i + 1, j], vv[i + 1, j]) if axis == 0 else (uu[i, j + 1], vv[i, j + 1])
            m = a[i, j] - b[i, j]
            edges.append((p, q, m / np.linalg.norm(m)))
    out = []
    for p, q, m in edges:
        p, q = np.array(p), np.array(q)

        def g(s):
            x = p + s * (q - p)
            return lambda_value_grad(surface, x[0], x[1], m)[0]

        try:
            ga, gb = g(0.0), g(1.0)
            if ga * gb > 0:
                continue
            s = brentq(g, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        except (ValueError, ArithmeticError):
            continue
        x = p + s * (q - p)
        try:
            smp = analyze_point(surface, x[0], x[1], nu_ref=None, tol=tol)
        except (CorankTwoError, TraceError, ArithmeticError):
            continue
        if abs(smp.lam) > tol.tau_sing or smp.sigma[1] > tol.tau_reg * max(1.0, smp.sigma[0]):
            continue
        if not surface.contains(smp.u, smp.v):
            continue
        out.append(smp)
    out.sort(key=lambda s: (round(s.u, 9), round(s.v, 9)))
    return out


# -- tracing ------------------------------------------------------------------


@dataclass
class SingularCurve:
    surface: object
    t: np.ndarray
    samples: list
    closed: bool = False
    stop_reasons: tuple = ("", "")
    tol: Tolerances = DEFAULT
    order: int = 5

    def __len__(self):
        return len(self.samples)

    @property
    def uv(self) -> np.ndarray:
        return np.array([[s.u, s.v] for s in self.samples])

    @property
    def normals(self) -> np.ndarray:
        return np.array([s.nu for s in self.samples])

    @property
    def seed_index(self) -> int:
        return int(np.argmin(np.abs(self.t)))

    def nearest_index(self, t: float) -> int:
        return int(np.argmin(np.abs(self.t - t)))

    def point_at(self, t: float) -> tuple[SingularPointSample, float]:
        """Curve point at parameter ``t`` (sample jets + polishing) and its exact t."""
        i = self.nearest_index(t)
        base = self.samples[i]
        dt = t - self.t[i]
        if abs(dt) < 1e-15:
            return base, float(self.t[i])
        U, V = curve_jets(self.surface, base, self.order + 1, self.tol)
        u, v = U.evaluate(dt), V.evaluate(dt)
        return analyze_point(self.surface, u, v, nu_ref=base.nu, tol=self.tol), float(t)

    def point_near(self, u: float, v: float) -> tuple[SingularPointSample, float]:
        """Closest curve point to (u, v), with its parameter."""
        d = np.linalg.norm(self.uv - np.array([u, v]), axis=1)
        i = int(np.argmin(d))
        base = self.samples[i]
        U, V = curve_jets(self.surface, base, 3, self.tol)
        # one Newton step on <gamma(dt) - q, gamma'(dt)> = 0 is plenty at sample spacing
        dt = 0.0
        for _ in range(8):
            p = np.array([U.evaluate(dt), V.evaluate(dt)])
            d1 = np.array([U.deriv().evaluate(dt), V.deriv().evaluate(dt)])
            d2 = np.array([U.deriv(2).evaluate(dt), V.deriv(2).evaluate(dt)])
            r = p - np.array([u, v])
            step = float(r @ d1) / float(d1 @ d1 + r @ d2)
            dt -= step
            if abs(step) < 1e-15:
                break
        return self.point_at(float(self.t[i] + dt))

    def extent(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])


def _step(surface, smp: SingularPointSample, h: float, direction: int, tol: Tolerances):
    T = smp.tangent * direction
    pred = np.array([smp.u, smp.v]) + h * T
    q, lam, g = polish(surface, pred[0], pred[1], smp.nu, tol)
    return q


def trace_singular_curve(surface, seed: SingularPointSample, step: Optional[float] = None,
                         max_len: Optional[float] = None, tol: Tolerances = DEFAULT,
                         order: int = 5) -> SingularCurve:
    """Predictor-corrector continuation of lambda = 0 in both directions from ``seed``."""
    if float(np.linalg.norm(seed.grad)) <= tol.tau_sing:
        raise TraceError("grad lambda vanishes at the seed")
    h0 = step if step is not None else surface.diameter / 200.0
    max_len = max_len if max_len is not None else 20.0 * surface.diameter
    branches = []
    reasons = []
    closed = False
    for direction in (1, -1):
        pts = [seed]
        length = 0.0
        reason = "max_len"
        while length < max_len:
            cur = pts[-1]
            h = h0
            nxt = None
            while h >= h0 / 64:
                try:
                    q = _step(surface, cur, h, direction, tol)
                    cand = analyze_point(surface, q[0], q[1], nu_ref=cur.nu, tol=tol,
                                         polish_point=False)
                except (TraceError, CorankTwoError, ArithmeticError):
                    h /= 2
                    continue
                dist = float(np.hypot(cand.u - cur.u, cand.v - cur.v))
                turn = float(cand.tangent @ cur.tangent)
                if abs(cand.lam) > tol.tau_sing or dist > 2 * h or turn < 0.9:
                    h /= 2
                    continue
                nxt = cand
                break
            if nxt is None:
                reason = "vanishing_gradient"
                break
            if not surface.contains(nxt.u, nxt.v):
                reason = "boundary"
                break
            length += float(np.hypot(nxt.u - pts[-1].u, nxt.v - pts[-1].v))
            pts.append(nxt)
            if direction == 1 and len(pts) > 3:
                back = float(np.hypot(nxt.u - seed.u, nxt.v - seed.v))
                if back < 0.75 * h0:
                    closed = True
                    reason = "closed"
                    break
        branches.append(pts)
        reasons.append(reason)
        if closed:
            break
    fwd = branches[0]
    bwd = branches[1][1:][::-1] if len(branches) > 1 else []
    samples = bwd + fwd
    if closed:
        samples = fwd[:-1]
    uv = np.array([[s.u, s.v] for s in samples])
    chord = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(uv, axis=0), axis=1))])
    t = chord - chord[len(bwd)]
    if len(reasons) == 1:
        reasons.append("closed")
    return SingularCurve(surface, t, samples, closed, (reasons[1], reasons[0]), tol, order)


def find_singular_curves(surface, grid_resolution: int = 64, step: Optional[float] = None,
                         tol: Tolerances = DEFAULT, order: int = 5,
                         seeds: Optional[list] = None) -> tuple[list, list]:
    """Trace every curve met by the grid scan.

    Returns ``(curves, rejected)`` where ``rejected`` holds singular points
    that are not fronts (those are not traced).
    """
    found = locate_singular_points(surface, grid_resolution, tol)
    if not found:
        return [], []
    fronts = [s for s in found if s.is_front(tol)]
    rejected = [s for s in found if not s.is_front(tol)]
    if seeds is None:
        seeds = list(getattr(surface, "points", ()))
    targets = list(seeds) + [(
        0.5 * sum(surface.u_range), 0.5 * sum(surface.v_range))]
    curves = []
    h0 = step if step is not None else surface.diameter / 200.0
    remaining = fronts
    while remaining:
        target = targets[0] if targets else (remaining[0].u, remaining[0].v)
        d = [math.hypot(s.u - target[0], s.v - target[1]) for s in remaining]
        seed = remaining[int(np.argmin(d))]
        seed = analyze_point(surface, seed.u, seed.v, nu_ref=None, tol=tol)
        if targets and len(targets) > 1:
            # snap the seed onto the requested point when it lies on this curve
            try:
                snapped = analyze_point(surface, target[0], target[1], nu_ref=seed.nu, tol=tol)
                if (math.hypot(snapped.u - seed.u, snapped.v - seed.v) < 4 * h0
                        and surface.contains(snapped.u, snapped.v)):
                    seed = analyze_point(surface, snapped.u, snapped.v, nu_ref=None, tol=tol,
                                         polish_point=False)
            except (TraceError, CorankTwoError, ArithmeticError):
                pass
        curve = trace_singular_curve(surface, seed, step, tol=tol, order=order)
        curves.append(curve)
        uv = curve.uv
        remaining = [s for s in remaining
                     if np.min(np.linalg.norm(uv - [s.u, s.v], axis=1)) > 2.5 * h0]
        if targets:
            targets.pop(0)
    return curves, rejected


# -- curve jets ---------------------------------------------------------------


def curve_jets(surface, point: SingularPointSample, order: int,
               tol: Tolerances = DEFAULT) -> tuple[Jet1, Jet1]:
    """Unit-speed jets (U(t), V(t)) of the singular curve through ``point``.

    Solved order by order from lambda(gamma(t)) = 0 and |gamma'| = 1, with
    gamma'(0) = T.
    """
    lam = lambda_jet(surface, point.u, point.v, point.nu, order)
    g = np.array([lam.coef(1, 0), lam.coef(0, 1)])
    if float(np.linalg.norm(g)) <= tol.tau_sing:
        raise TraceError("grad lambda vanishes: curve jets undefined")
    c1 = unit(rot90_cw(g))
    A = np.vstack([g, c1])
    cu = np.zeros(order + 1)
    cv = np.zeros(order + 1)
    if order >= 1:
        cu[1], cv[1] = c1
    for k in range(2, order + 1):
        U, V = Jet1(cu[: k + 1], k), Jet1(cv[: k + 1], k)
        r = lam.truncate(k).compose(U, V).coef(k)
        dU, dV = U.deriv(), V.deriv()
        speed = dU * dU + dV * dV
        s = speed.coef(k - 1)
        ck = np.linalg.solve(A, [-r, -s / (2 * k)])
        cu[k], cv[k] = ck
    cu[0], cv[0] = point.u, point.v
    return Jet1(cu, order), Jet1(cv, order)


def null_field_along(surface, point: SingularPointSample, U: Jet1, V: Jet1) -> tuple[Jet1, Jet1]:
    """Unit null field eta(t) along the curve, pointing to the left of T."""
    order = U.order
    f = surface.jet(point.u, point.v, order + 1)
    du, dv = U - point.u, V - point.v
    fu = f.deriv(1, 0).compose(du, dv)
    fv = f.deriv(0, 1).compose(du, dv)
    one = fu.x.constant_like(1.0)
    if np.linalg.norm(fu.value) >= np.linalg.norm(fv.value):
        a = -J.dot(fu, fv) / J.dot(fu, fu)
        e = (a, one)
    else:
        b = -J.dot(fu, fv) / J.dot(fv, fv)
        e = (one, b)
    n = J.apply("sqrt", e[0] * e[0] + e[1] * e[1])
    eu, ev = e[0] / n, e[1] / n
    left = rot90_ccw(point.tangent)
    if eu.value * left[0] + ev.value * left[1] < 0:
        eu, ev = -eu, -ev
    return eu, ev


# -- charts -------------------------------------------------------------------


@dataclass
class AdaptedChart:
    """Polynomial chart (t, s) -> (u, v) about a singular point."""

    kind: str
    point: SingularPointSample
    t0: float
    U: Jet2
    V: Jet2
    F: JetVec3 = field(repr=False)
    nu: JetVec3 = field(repr=False)
    h: JetVec3 = field(repr=False)

    @property
    def order(self) -> int:
        return self.F.order

    def map(self, t: float, s: float) -> tuple[float, float]:
        return self.U.evaluate(t, s), self.V.evaluate(t, s)


def _finish_chart(surface, kind, point, t0, U, V, order, tol) -> AdaptedChart:
    F = surface.pullback(U, V).truncate(order)
    scale = max(1.0, float(np.linalg.norm(F.partial(1, 0))))
    try:
        nu, h = adapted_unit_normal(F, tol.override(tau_axis=tol.tau_axis * scale))
    except AxisVanishingError as exc:
        raise ChartError(f"chart is not adapted: {exc}") from None
    if float(nu.value @ point.nu) < 0:
        raise ChartError("chart normal disagrees with the traced normal")
    return AdaptedChart(kind, point, t0, U, V, F, nu, h)


def build_adapted_chart(surface, point: SingularPointSample, order: int = 5, t0: float = 0.0,
                        tol: Tolerances = DEFAULT) -> AdaptedChart:
    """phi(t, s) = gamma(t) + s eta(t) with eta the unit null field."""
    Uc, Vc = curve_jets(surface, point, order, tol)
    eu, ev = null_field_along(surface, point, Uc, Vc)
    s = Jet2.variable(1, 0.0, order)
    U = J.lift(Uc, order) + J.lift(eu, order) * s
    V = J.lift(Vc, order) + J.lift(ev, order) * s
    return _finish_chart(surface, "adapted", point, t0, U, V, order, tol)


def build_special_adapted_chart(surface, point: SingularPointSample, order: int = 5,
                                t0: float = 0.0, tol: Tolerances = DEFAULT) -> AdaptedChart:
    """Adapted chart made orthonormal along the axis: arclength, shear, scale."""
    K = order + 2
    base = build_adapted_chart(surface, point, K, t0, tol)
    U, V = base.U, base.V
    tau = Jet2.variable(0, 0.0, K)
    s = Jet2.variable(1, 0.0, K)
    # (i) arclength of the image curve
    Ft = base.F.deriv(1, 0).axis()
    speed = J.norm(Ft)
    g = 1.0 / speed
    T = Jet1.variable(0.0, K)
    for _ in range(K + 1):
        T = g.compose(T).integrate(0.0).truncate(K)
    U, V = U.compose(J.lift(T, K), s), V.compose(J.lift(T, K), s)
    # (ii) shear to make f_ss orthogonal to f_t on the axis
    F1 = surface.pullback(U, V)
    F1t, F1ss = F1.deriv(1, 0).axis(), F1.deriv(0, 2).axis()
    beta = -J.dot(F1t, F1ss) / J.dot(F1t, F1t)
    inner = tau + J.lift(beta, K) * s * s * 0.5
    U, V = U.compose(inner, s), V.compose(inner, s)
    # (iii) scale s so that |f_ss| = 1 on the axis
    F2 = surface.pullback(U, V)
    F2ss = F2.deriv(0, 2).axis()
    nss = J.dot(F2ss, F2ss)
    if nss.value <= tol.tau_reg:
        raise NotCuspidalEdgeError("f_ss vanishes on the axis")
    a = J.apply("pow_const", nss, -0.25)
    U, V = U.compose(tau, J.lift(a, K) * s), V.compose(tau, J.lift(a, K) * s)
    chart = _finish_chart(surface, "special_adapted", point, t0,
                          U.truncate(order + 1), V.truncate(order + 1), order + 1, tol)
    return chart


def special_frame_residual(chart: AdaptedChart) -> float:
    """max of |<f_t, f_ss>|, ||f_t| - 1|, ||f_ss| - 1| on the axis jets."""
    Ft = chart.F.deriv(1, 0).axis()
    Fss = chart.F.deriv(0, 2).axis()
    r = [J.dot(Ft, Fss), J.dot(Ft, Ft) - 1.0, J.dot(Fss, Fss) - 1.0]
    return float(max(np.max(np.abs(x.coeffs)) for x in r))


def orientation_probe(surface, curve: SingularCurve, offset: float = 1e-3,
                      count: int = 10) -> tuple[int, int]:
    """Count probes with lambda > 0 on the left and lambda < 0 on the right."""
    idx = np.linspace(0, len(curve) - 1, count).round().astype(int)
    left_ok = right_ok = 0
    for i in idx:
        smp = curve.samples[i]
        n = rot90_ccw(smp.tangent)
        for sgn in (1, -1):
            q = np.array([smp.u, smp.v]) + sgn * offset * n
            lam, _ = lambda_value_grad(surface, q[0], q[1], smp.nu)
            if sgn > 0 and lam > 0:
                left_ok += 1
            if sgn < 0 and lam < 0:
                right_ok += 1
    return left_ok, right_ok
