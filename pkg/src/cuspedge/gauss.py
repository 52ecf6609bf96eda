"""Gauss map singularities at cuspidal edges and the theorem checks built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    DegenerateGaussMapError,
    GeometryError,
    NotCuspidalEdgeError,
    UnboundedCurvatureError,
    UnsupportedClassification,
)
from .frontal import (
    BoundedCurvatureData,
    bounded_curvature_data,
    curvatures_at,
    modified_forms,
    weingarten_derivatives,
)
from .invariants import (
    DerivativeResult,
    EdgeInvariants,
    invariant_derivatives,
    invariants_from_chart,
    numeric_K_limit,
)
from .numerics import richardson
from .singular import (
    AdaptedChart,
    SingularCurve,
    build_adapted_chart,
    build_special_adapted_chart,
)
from .spherical import CuspData, SphericalCurveJet, cuspidal_curvature
from .tolerances import DEFAULT, Tolerances


class GaussClass(str, Enum):
    REGULAR = "regular"
    FOLD = "fold"
    CUSP = "cusp"
    NONDEGENERATE_OTHER = "nondegenerate_other"
    DEGENERATE = "degenerate"
    UNSUPPORTED = "unsupported"


@dataclass
class GaussClassification:
    cls: GaussClass
    cusp_sign: str = "none"
    t: float = 0.0
    u: float = 0.0
    v: float = 0.0
    mu_nu: Optional[float] = None
    evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"t": self.t, "u": self.u, "v": self.v, "class": self.cls.value,
                "cusp_sign": self.cusp_sign, "mu_nu": self.mu_nu,
                "witnesses": dict(self.evidence)}


@dataclass
class CheckEntry:
    name: str
    hypotheses_met: bool
    conclusion_holds: Optional[bool]
    witnesses: dict = field(default_factory=dict)
    note: str = ""

    @property
    def status(self) -> str:
        if not self.hypotheses_met:
            return "hypotheses_not_met"
        return "passed" if self.conclusion_holds else "failed"

    def as_dict(self) -> dict:
        d = {"name": self.name, "hypotheses_met": self.hypotheses_met,
             "conclusion_holds": self.conclusion_holds, "status": self.status,
             "witnesses": dict(self.witnesses)}
        if self.note:
            d["note"] = self.note
        return d


# -- per-point analysis -------------------------------------------------------


class PointAnalysis:
    """Lazily computed data at one point of a singular curve."""

    def __init__(self, curve: SingularCurve, t: float, tol: Optional[Tolerances] = None):
        self.curve = curve
        self.surface = curve.surface
        self.tol = tol or curve.tol
        self.point, self.t = curve.point_at(t)
        self._cache: dict = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def chart(self) -> AdaptedChart:
        return self._get("chart", lambda: build_adapted_chart(
            self.surface, self.point, self.curve.order, self.t, self.tol))

    @property
    def special(self) -> AdaptedChart:
        return self._get("special", lambda: build_special_adapted_chart(
            self.surface, self.point, self.curve.order, self.t, self.tol))

    @property
    def invariants(self) -> EdgeInvariants:
        def make():
            inv = invariants_from_chart(self.chart, self.t, self.tol)
            d = self.derivatives
            inv.kappa_nu_p, inv.kappa_t_p = d.kappa_nu_p, d.kappa_t_p
            inv.flags.extend(d.flags)
            return inv
        return self._get("inv", make)

    @property
    def derivatives(self) -> DerivativeResult:
        return self._get("deriv", lambda: invariant_derivatives(self.curve, self.t, tol=self.tol))

    @property
    def is_cuspidal_edge(self) -> bool:
        return self.point.is_cuspidal_edge(self.tol)

    def kappa_scale(self) -> float:
        """Scale for kappa_nu and kappa_t zero tests: max(1, |f_tt| / |f_t|^2)."""
        F = self.chart.F
        return max(1.0, float(np.linalg.norm(F.partial(2, 0)) / np.linalg.norm(F.partial(1, 0)) ** 2))

    @property
    def lambda_vanishes(self) -> bool:
        """Lambda(p) = 0, equivalently kappa_nu(p) = 0."""
        return abs(self.invariants.kappa_nu) <= self.tol.tau_bound * self.kappa_scale()

    @property
    def K_bounded_near(self) -> bool:
        """kappa_nu vanishes at p and on the derivative stencil around it."""
        def make():
            d = self.derivatives
            return (self.lambda_vanishes
                    and abs(d.kappa_nu_p) <= self.tol.tau_zero * self.kappa_scale())
        return self._get("bounded", make)

    @property
    def nondegeneracy_quantity(self) -> float:
        inv = self.invariants
        return 4 * inv.kappa_t ** 2 + inv.kappa_s * inv.kappa_c ** 2

    @property
    def bounded_data(self) -> BoundedCurvatureData:
        return self._get("bdata", lambda: bounded_curvature_data(
            self.surface, self.special, self.point.nu, self.invariants.kappa_nu, tol=self.tol))

    @property
    def K_limit_closed(self) -> float:
        return -self.nondegeneracy_quantity / 4

    @property
    def K_limit_numeric(self) -> tuple[float, float]:
        return self._get("klim", lambda: numeric_K_limit(self.surface, self.special, tol=self.tol))

    @property
    def gauss_locus(self) -> SphericalCurveJet:
        return self._get("locus", lambda: gauss_locus_jets(self))

    @property
    def cusp_data(self) -> CuspData:
        return self._get("cusp", lambda: cuspidal_curvature(self.gauss_locus, self.tol))


def gauss_locus_jets(pa: PointAnalysis) -> SphericalCurveJet:
    """Jet of t -> nu(gamma(t)) with gamma oriented so that lambda > 0 on its left."""
    if not pa.K_bounded_near:
        raise UnboundedCurvatureError("K is unbounded near the point")
    if abs(pa.nondegeneracy_quantity) <= pa.tol.tau_bound:
        raise DegenerateGaussMapError("K vanishes at the point")
    return SphericalCurveJet(pa.chart.nu.axis())


# -- non-degeneracy and classification ---------------------------------------


def is_nondegenerate_gauss_singularity(pa: PointAnalysis) -> tuple[bool, dict]:
    """Lemma criterion and the direct (d_u kappa, d_v kappa) test."""
    d = pa.derivatives
    q = pa.nondegeneracy_quantity
    tol = pa.tol
    lemma = abs(d.kappa_nu_p) > tol.tau_zero or abs(q) > tol.tau_bound
    wit = {"kappa_nu_p": d.kappa_nu_p, "nondegeneracy_quantity": q, "lemma": lemma}
    if pa.K_bounded_near:
        bd = pa.bounded_data
        du, dv = d.kappa_nu_p, bd.dv_kappa
        direct = abs(du) > tol.tau_zero or abs(dv) > tol.tau_zero
        wit.update({"du_kappa": du, "dv_kappa": dv, "direct": direct})
    return lemma, wit


def _zero(x: float, tau: float) -> bool:
    return abs(x) <= tau


def classify(pa: PointAnalysis, allow_unbounded: bool = False) -> GaussClassification:
    """Classify the Gauss map at a cuspidal edge point.

    Order of tests: unbounded K (unsupported, or Regular when
    ``allow_unbounded`` and Lambda(p) != 0); degenerate; fold; cusp;
    other non-degenerate.
    """
    tol = pa.tol
    if not pa.is_cuspidal_edge:
        raise NotCuspidalEdgeError(f"({pa.point.u}, {pa.point.v}) is not a cuspidal edge")
    inv = pa.invariants
    d = pa.derivatives
    q = pa.nondegeneracy_quantity
    ev = {
        "kappa_s": inv.kappa_s, "kappa_nu": inv.kappa_nu, "kappa_c": inv.kappa_c,
        "kappa_t": inv.kappa_t, "kappa_t_p": d.kappa_t_p, "kappa_nu_p": d.kappa_nu_p,
        "nondegeneracy_quantity": q, "mu_nu": None, "K_limit": None,
    }
    base = dict(t=pa.t, u=pa.point.u, v=pa.point.v)
    if not pa.K_bounded_near:
        if allow_unbounded and not pa.lambda_vanishes:
            return GaussClassification(GaussClass.REGULAR, evidence=ev, **base)
        raise UnsupportedClassification(
            f"K is unbounded near the point (kappa_nu = {inv.kappa_nu:.3e})")
    ev["K_limit"] = pa.K_limit_closed
    nondeg, _ = is_nondegenerate_gauss_singularity(pa)
    if not nondeg:
        return GaussClassification(GaussClass.DEGENERATE, evidence=ev, **base)
    kt_zero = _zero(inv.kappa_t, tol.tau_bound * pa.kappa_scale())
    if not kt_zero and abs(q) > tol.tau_bound:
        return GaussClassification(GaussClass.FOLD, evidence=ev, **base)
    if kt_zero and not _zero(d.kappa_t_p, tol.tau_zero) and not _zero(inv.kappa_s, tol.tau_bound):
        cd = pa.cusp_data
        mu_closed = cusp_sign_via_invariants(pa)
        ev["mu_nu"] = cd.mu
        ev["mu_nu_closed_form"] = mu_closed
        return GaussClassification(GaussClass.CUSP, cd.sign, mu_nu=cd.mu, evidence=ev, **base)
    return GaussClassification(GaussClass.NONDEGENERATE_OTHER, evidence=ev, **base)


def cusp_sign_via_invariants(pa: PointAnalysis) -> float:
    """mu^nu = 2 kappa_s / sqrt(|kappa_t'|)."""
    kp = pa.derivatives.kappa_t_p
    if kp == 0.0:
        raise DegenerateGaussMapError("kappa_t' vanishes")
    return 2 * pa.invariants.kappa_s / math.sqrt(abs(kp))


def safe_classify(pa: PointAnalysis) -> GaussClassification:
    try:
        return classify(pa)
    except (UnsupportedClassification, NotCuspidalEdgeError) as exc:
        return GaussClassification(GaussClass.UNSUPPORTED, t=pa.t, u=pa.point.u, v=pa.point.v,
                                   evidence={"reason": str(exc)})


# -- probes -------------------------------------------------------------------


def probe_K(pa: PointAnalysis, count: int = 100, seed: int = 0,
            s_range=(1e-3, 1e-1), t_half_width: float = 0.05) -> np.ndarray:
    """Gaussian curvature at deterministic pseudo-random off-curve points near p."""
    rng = np.random.default_rng(seed)
    out = []
    chart = pa.chart
    lo, hi = pa.curve.extent()
    tw = min(t_half_width, 0.5 * (hi - lo))
    tries = 0
    while len(out) < count and tries < 20 * count:
        tries += 1
        a = rng.uniform(-tw, tw)
        s = math.exp(rng.uniform(math.log(s_range[0]), math.log(s_range[1])))
        s *= 1 if rng.random() < 0.5 else -1
        u, v = chart.map(a, s)
        if not pa.surface.contains(u, v):
            continue
        smp = curvatures_at(pa.surface, u, v, reference=pa.point.nu, tol=pa.tol)
        if smp.K is not None:
            out.append(smp.K)
    return np.array(out)


def sigma_K_limits(pa: PointAnalysis, sigma0: float = 1e-2, levels: int = 4) -> tuple[float, float]:
    """lim s K(s) on each side of the curve; zero iff K stays bounded."""
    res = []
    for sgn in (1.0, -1.0):
        vals = []
        for k in range(levels):
            s = sigma0 / 2 ** k
            u, v = pa.special.map(0.0, sgn * s)
            smp = curvatures_at(pa.surface, u, v, reference=pa.point.nu, tol=pa.tol)
            vals.append(s * smp.K)
        res.append(richardson(vals, powers=[1, 2, 3, 4])[0])
    return res[0], res[1]


# -- theorem checks -----------------------------------------------------------


def check_cuspidal_edge(pa: PointAnalysis) -> CheckEntry:
    p = pa.point
    ok = pa.is_cuspidal_edge
    return CheckEntry("cuspidal_edge", True, ok, {
        "eta_lambda": p.eta_lambda, "front_measure": p.front_measure,
        "criterion_measure": p.criterion_measure()})


def check_bounded_curvature(pa: PointAnalysis) -> CheckEntry:
    """kappa_nu = 0 along the curve iff K is bounded near it."""
    if not pa.is_cuspidal_edge:
        return CheckEntry("bounded_curvature", False, None)
    a, b = sigma_K_limits(pa)
    scale = max(1.0, abs(pa.invariants.kappa_c) ** 2)
    numeric_bounded = max(abs(a), abs(b)) <= pa.tol.tau_K * scale
    holds = numeric_bounded == pa.K_bounded_near
    return CheckEntry("bounded_curvature", True, holds, {
        "kappa_nu": pa.invariants.kappa_nu, "kappa_nu_p": pa.derivatives.kappa_nu_p,
        "sK_limit_plus": a, "sK_limit_minus": b, "K_bounded": pa.K_bounded_near})


def special_identity_residuals(chart: AdaptedChart, tol: Tolerances = DEFAULT) -> dict:
    """kappa_s = -E~_vv/2, kappa_nu = L~, kappa_c = 2N~, kappa_t = M~ at the chart origin."""
    inv = invariants_from_chart(chart, tol=tol)
    forms = modified_forms(chart.F, chart.nu, chart.h)
    return {
        "kappa_s": abs(inv.kappa_s + forms.E.partial(0, 2) / 2),
        "kappa_nu": abs(inv.kappa_nu - forms.L.value),
        "kappa_c": abs(inv.kappa_c - 2 * forms.N.value),
        "kappa_t": abs(inv.kappa_t - forms.M.value),
    }


def weingarten_residuals(chart: AdaptedChart, tol: Tolerances = DEFAULT) -> dict:
    """Residuals of nu_u, nu_v and h_u against their invariant expressions."""
    inv = invariants_from_chart(chart, tol=tol)
    F, nu, h = chart.F, chart.nu, chart.h
    fu = F.partial(1, 0)
    hv, nuv = h.value, nu.value
    nu_u, nu_v = nu.partial(1, 0), nu.partial(0, 1)
    forms = modified_forms(F, nu, h)
    w_u, w_v = weingarten_derivatives(forms, F, h, 0.0, tol)
    return {
        "nu_u": float(np.linalg.norm(nu_u + inv.kappa_nu * fu + inv.kappa_t * hv)),
        "nu_v": float(np.linalg.norm(nu_v + inv.kappa_c / 2 * hv)),
        "h_u": float(np.linalg.norm(h.partial(1, 0) + inv.kappa_s * fu - inv.kappa_t * nuv)),
        "weingarten_u": float(np.linalg.norm(w_u - nu_u)),
        "weingarten_v": float(np.linalg.norm(w_v - nu_v)),
    }


def check_special_identities(pa: PointAnalysis) -> CheckEntry:
    if not pa.is_cuspidal_edge:
        return CheckEntry("special_adapted_identities", False, None)
    r = special_identity_residuals(pa.special, pa.tol)
    return CheckEntry("special_adapted_identities", True,
                      max(r.values()) < pa.tol.tau_id, r)


def check_weingarten(pa: PointAnalysis) -> CheckEntry:
    if not pa.is_cuspidal_edge:
        return CheckEntry("weingarten_identities", False, None)
    r = weingarten_residuals(pa.special, pa.tol)
    if not pa.lambda_vanishes:
        # h_u identity is stated where kappa_nu vanishes
        r.pop("h_u")
    return CheckEntry("weingarten_identities", True, max(r.values()) < pa.tol.tau_id, r)


def check_bounded_principal(pa: PointAnalysis) -> CheckEntry:
    if not pa.is_cuspidal_edge:
        return CheckEntry("bounded_principal_curvature", False, None)
    inv = pa.invariants
    bd = pa.bounded_data
    w = {"kappa_hat": bd.kappa_hat, "kappa_c_half": inv.kappa_c / 2,
         "kappa": bd.kappa, "kappa_nu": inv.kappa_nu, "branch_ambiguous": bd.ambiguous}
    ok = abs(bd.kappa_hat - inv.kappa_c / 2) < 1e-5 and abs(bd.kappa - inv.kappa_nu) < 1e-5
    if pa.lambda_vanishes:
        predicted = -pa.nondegeneracy_quantity / (2 * inv.kappa_c)
        w.update({"dv_kappa": bd.dv_kappa, "dv_kappa_formula": predicted})
        ok = ok and abs(bd.dv_kappa - predicted) < 1e-4 * max(1.0, abs(predicted))
    return CheckEntry("bounded_principal_curvature", True, ok and not bd.ambiguous, w)


def check_limit_gaussian_curvature(pa: PointAnalysis) -> CheckEntry:
    if not (pa.is_cuspidal_edge and pa.K_bounded_near):
        return CheckEntry("limit_gaussian_curvature", False, None, note="K unbounded")
    closed = pa.K_limit_closed
    num, err = pa.K_limit_numeric
    return CheckEntry("limit_gaussian_curvature", True, abs(closed - num) < pa.tol.tau_K,
                      {"closed_form": closed, "numeric_limit": num, "extrapolation_error": err})


def check_nondegeneracy_lemma(pa: PointAnalysis) -> CheckEntry:
    if not (pa.is_cuspidal_edge and pa.lambda_vanishes and pa.K_bounded_near):
        return CheckEntry("nondegeneracy_lemma", False, None)
    lemma, w = is_nondegenerate_gauss_singularity(pa)
    return CheckEntry("nondegeneracy_lemma", True, lemma == w["direct"], w)


def check_theorem_A(pa: PointAnalysis, probes: int = 100, seed: int = 0) -> CheckEntry:
    """Bounded, non-degenerate, not a fold: sign K = -sign kappa_s near p."""
    name = "theorem_A"
    if not (pa.is_cuspidal_edge and pa.lambda_vanishes and pa.K_bounded_near):
        return CheckEntry(name, False, None)
    cls = classify(pa)
    inv = pa.invariants
    K = probe_K(pa, probes, seed)
    w = {"class": cls.cls.value, "kappa_s": inv.kappa_s, "probe_count": int(K.size),
         "probe_K_min": float(K.min()) if K.size else None,
         "probe_K_max": float(K.max()) if K.size else None}
    if cls.cls == GaussClass.FOLD:
        # one-directional statement at folds: bounded K > 0 forces kappa_s <= 0
        klim = pa.K_limit_closed
        holds = not (klim > 0 and inv.kappa_s > 0)
        w["K_limit"] = klim
        return CheckEntry(name, True, holds, w, note="fold: one-directional check")
    if cls.cls not in (GaussClass.CUSP, GaussClass.NONDEGENERATE_OTHER):
        return CheckEntry(name, False, None, w)
    constant = K.size > 0 and (np.all(K > 0) or np.all(K < 0))
    holds = bool(constant and np.sign(K[0]) == -np.sign(inv.kappa_s))
    return CheckEntry(name, True, holds, w)


def check_theorem_B_and_corollary(pa: PointAnalysis) -> CheckEntry:
    name = "theorem_B_and_corollary"
    if not (pa.is_cuspidal_edge and pa.lambda_vanishes and pa.K_bounded_near):
        return CheckEntry(name, False, None)
    cls = classify(pa)
    if cls.cls != GaussClass.CUSP:
        return CheckEntry(name, False, None, {"class": cls.cls.value})
    inv = pa.invariants
    mu = cls.mu_nu
    mu_closed = cls.evidence["mu_nu_closed_form"]
    klim = pa.K_limit_closed
    zig = cls.cusp_sign == "zig"
    agree = abs(mu - mu_closed) <= pa.tol.tau_mu * max(abs(mu), abs(mu_closed))
    thm_b = zig == (inv.kappa_s > 0)
    cor = (klim > 0 and not zig) or (klim < 0 and zig)
    return CheckEntry(name, True, bool(agree and thm_b and cor), {
        "cusp_sign": cls.cusp_sign, "kappa_s": inv.kappa_s, "mu_spherical": mu,
        "mu_closed_form": mu_closed, "K_limit": klim, "mu_agree": bool(agree),
        "theorem_B": bool(thm_b), "corollary": bool(cor)})


def cone_point_check(curve: SingularCurve, invariants: list, tol: Optional[Tolerances] = None,
                     K_limit: Optional[float] = None) -> CheckEntry:
    """A line-of-curvature edge with non-zero bounded K has a one-point Gauss locus."""
    tol = tol or curve.tol
    name = "cone_point"
    kt = max((abs(i.kappa_t) for i in invariants), default=float("inf"))
    kn = max((abs(i.kappa_nu) for i in invariants), default=float("inf"))
    w = {"max_abs_kappa_t": kt, "max_abs_kappa_nu": kn, "K_limit": K_limit}
    if not (kt < tol.tau_bound and kn < tol.tau_bound):
        return CheckEntry(name, False, None, w)
    if K_limit is None or abs(K_limit) <= tol.tau_K:
        return CheckEntry(name, False, None, w, note="K vanishes")
    N = curve.normals
    diam = float(max(np.linalg.norm(N[i] - N[j]) for i in range(len(N)) for j in (0, len(N) - 1)))
    diam = max(diam, float(np.max(np.linalg.norm(N[:, None, :] - N[None, :, :], axis=-1))))
    w.update({"diameter": diam, "locus": [float(x) for x in N.mean(axis=0)]})
    return CheckEntry(name, True, diam < tol.tau_point, w)


POINT_CHECKS = (
    check_cuspidal_edge,
    check_bounded_curvature,
    check_special_identities,
    check_weingarten,
    check_bounded_principal,
    check_limit_gaussian_curvature,
    check_nondegeneracy_lemma,
    check_theorem_A,
    check_theorem_B_and_corollary,
)


def run_point_checks(pa: PointAnalysis, seed: int = 0) -> list[CheckEntry]:
    out = []
    for fn in POINT_CHECKS:
        try:
            out.append(fn(pa, seed=seed) if fn is check_theorem_A else fn(pa))
        except GeometryError as exc:
            out.append(CheckEntry(fn.__name__.replace("check_", ""), True, False,
                                  note=f"{type(exc).__name__}: {exc}"))
    return out


def frame_identity_checks(curve: SingularCurve, t: float) -> CheckEntry:
    pa = PointAnalysis(curve, t)
    r = weingarten_residuals(pa.special, pa.tol)
    return CheckEntry("frame_identities", True, max(r.values()) < pa.tol.tau_id, r)
