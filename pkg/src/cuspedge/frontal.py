"""Unit normals, area density, discriminant and curvatures of a frontal."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import jets as J
from .errors import DegenerateFrameError, SingularPointError
from .jets import Jet2, JetVec3
from .numerics import richardson
from .tolerances import DEFAULT, Tolerances


# -- normals ------------------------------------------------------------------


def unit_normal(fjet: JetVec3, sign: int = 1, tol: float = DEFAULT.tau_reg) -> JetVec3:
    """nu = f_u x f_v / |f_u x f_v| at a regular point."""
    n = J.cross(fjet.deriv(1, 0), fjet.deriv(0, 1))
    size = float(np.linalg.norm(n.value))
    scale = max(1.0, float(np.linalg.norm(fjet.partial(1, 0)) * np.linalg.norm(fjet.partial(0, 1))))
    if size <= tol * scale:
        raise SingularPointError(f"|f_u x f_v| = {size:.3e} at the base point is below tolerance")
    nu = J.normalize(n)
    return -nu if sign < 0 else nu


def adapted_unit_normal(Fjet: JetVec3, tol: Tolerances = DEFAULT) -> tuple[JetVec3, JetVec3]:
    """nu = f_u x h / |f_u x h| in an adapted chart, where f_v = v h.

    Returns ``(nu, h)``; ``nu`` has order N-1 for an order-N input.
    """
    h = J.divide_by_v(Fjet.deriv(0, 1), tol.tau_axis)
    fu = Fjet.deriv(1, 0)
    n = J.cross(fu, h)
    size = float(np.linalg.norm(n.value))
    if size <= tol.tau_reg * max(1.0, float(np.linalg.norm(fu.value) * np.linalg.norm(h.value))):
        raise DegenerateFrameError(
            f"|f_u x h| = {size:.3e}: the singular point is worse than a cuspidal edge")
    return J.normalize(n), h


def area_density_and_discriminant(fjet: JetVec3, nu: JetVec3) -> tuple[Jet2, Jet2]:
    """lambda = det(f_u, f_v, nu) and Lambda = det(nu_u, nu_v, nu) as jets."""
    lam = J.det3(fjet.deriv(1, 0), fjet.deriv(0, 1), nu)
    Lam = J.det3(nu.deriv(1, 0), nu.deriv(0, 1), nu)
    return lam, Lam


# -- curvature at a point ----------------------------------------------------


def principal_branches(K: float, H: float) -> tuple[float, float]:
    """Roots of k^2 - 2Hk + K, larger modulus first, without cancellation."""
    disc = max(H * H - K, 0.0)
    big = H + math.copysign(math.sqrt(disc), H)
    if big == 0.0:
        return 0.0, 0.0
    return big, K / big


@dataclass
class CurvatureSample:
    u: float
    v: float
    lam: float
    Lam: float
    K: Optional[float]
    H: Optional[float]
    k1: Optional[float]
    k2: Optional[float]
    normal: np.ndarray = field(repr=False)

    @property
    def unbounded(self) -> bool:
        return self.K is None


def curvatures_at(surface, u: float, v: float, reference=None,
                  tol: Tolerances = DEFAULT) -> CurvatureSample:
    """K, H and principal curvatures at (u, v).

    ``reference`` fixes the sign of nu (nu is aligned with it); otherwise the
    surface co-orientation applied to f_u x f_v is used.  Values are ``None``
    (unbounded) when |lambda| <= tau_sing.
    """
    f = surface.jet(u, v, 2)
    fu, fv = f.deriv(1, 0), f.deriv(0, 1)
    n = J.cross(fu, fv)
    nval = n.value
    size = float(np.linalg.norm(nval))
    if reference is not None:
        sign = 1 if float(np.dot(nval, reference)) >= 0 else -1
    else:
        sign = surface.co_orientation
    if size <= tol.tau_sing:
        zero = np.zeros(3)
        return CurvatureSample(u, v, 0.0, float("nan"), None, None, None, None, zero)
    nu = J.normalize(n) * float(sign)
    lam, Lam = area_density_and_discriminant(f, nu)
    lam0, Lam0 = lam.value, Lam.value
    if abs(lam0) <= tol.tau_sing:
        return CurvatureSample(u, v, lam0, Lam0, None, None, None, None, nu.value)
    K = Lam0 / lam0
    E, F, G = (float(np.dot(a, b)) for a, b in
               ((fu.value, fu.value), (fu.value, fv.value), (fv.value, fv.value)))
    nv = nu.value
    L = float(np.dot(f.partial(2, 0), nv))
    M = float(np.dot(f.partial(1, 1), nv))
    N = float(np.dot(f.partial(0, 2), nv))
    H = (E * N - 2 * F * M + G * L) / (2 * lam0 * lam0)
    k1, k2 = principal_branches(K, H)
    return CurvatureSample(u, v, lam0, Lam0, K, H, k1, k2, nv)


def gaussian_curvature_regular(surface, u: float, v: float) -> float:
    """K = (LN - M^2)/(EG - F^2), independent of the normal's sign."""
    s = curvatures_at(surface, u, v)
    if s.K is None:
        raise SingularPointError(f"({u}, {v}) is singular")
    return s.K


# -- modified fundamental forms ----------------------------------------------


@dataclass
class ModifiedFundamentalForms:
    E: Jet2
    F: Jet2
    G: Jet2
    L: Jet2
    M: Jet2
    N: Jet2

    def values(self) -> dict:
        return {k: getattr(self, k).value for k in "EFGLMN"}


def modified_forms(Fjet: JetVec3, nu: JetVec3, h: JetVec3) -> ModifiedFundamentalForms:
    """E~ = |f_u|^2, F~ = <f_u, h>, G~ = |h|^2, L~, M~, N~ from nu_u and nu_v."""
    fu = Fjet.deriv(1, 0)
    nu_u, nu_v = nu.deriv(1, 0), nu.deriv(0, 1)
    return ModifiedFundamentalForms(
        E=J.dot(fu, fu), F=J.dot(fu, h), G=J.dot(h, h),
        L=-J.dot(fu, nu_u), M=-J.dot(h, nu_u), N=-J.dot(h, nu_v),
    )


def weingarten_derivatives(forms: ModifiedFundamentalForms, Fjet: JetVec3, h: JetVec3,
                           v: float = 0.0, tol: Tolerances = DEFAULT):
    """nu_u and nu_v at the base point from the modified forms (frame {f_u, h})."""
    E, F, G = forms.E.value, forms.F.value, forms.G.value
    L, M, N = forms.L.value, forms.M.value, forms.N.value
    d = E * G - F * F
    if d <= tol.tau_reg:
        raise DegenerateFrameError(f"E~G~ - F~^2 = {d:.3e}")
    fu, hv = Fjet.partial(1, 0), h.value
    nu_u = ((F * M - G * L) * fu + (F * L - E * M) * hv) / d
    nu_v = ((F * N - v * G * M) * fu + (v * F * M - E * N) * hv) / d
    return nu_u, nu_v


# -- bounded principal curvature ---------------------------------------------


@dataclass
class BoundedCurvatureData:
    kappa: float
    kappa_hat: float
    dv_kappa: float
    kappa_hat_error: float = 0.0
    dv_kappa_error: float = 0.0
    ambiguous: bool = False


def _chart_point(chart, s: float):
    U, V = chart.U, chart.V
    u, v = U.evaluate(0.0, s), V.evaluate(0.0, s)
    jac = np.array([[U.deriv(1, 0).evaluate(0.0, s), U.deriv(0, 1).evaluate(0.0, s)],
                    [V.deriv(1, 0).evaluate(0.0, s), V.deriv(0, 1).evaluate(0.0, s)]])
    return u, v, float(np.linalg.det(jac))


def branch_values(surface, chart, s: float, nu_p, kappa_nu_p: float, tol: Tolerances = DEFAULT):
    """(kappa, kappa_hat) at the chart point (0, s) with kappa_hat = lambda_chart kappa~."""
    u, v, jac = _chart_point(chart, s)
    smp = curvatures_at(surface, u, v, reference=nu_p, tol=tol)
    if smp.K is None:
        raise SingularPointError(f"probe ({u}, {v}) is singular")
    a, b = smp.k1, smp.k2
    kappa, other = (a, b) if abs(a - kappa_nu_p) < abs(b - kappa_nu_p) else (b, a)
    return kappa, smp.lam * jac * other, (a, b)


def bounded_curvature_data(surface, chart, nu_p, kappa_nu_p: float, sigma0: float = 1e-2,
                           levels: int = 4, tol: Tolerances = DEFAULT) -> BoundedCurvatureData:
    """kappa(p), kappa_hat(p) and d_v kappa(p) from symmetric limits along the s-line."""
    kap_avg, hat_avg, dv = [], [], []
    for k in range(levels):
        s = sigma0 / 2 ** k
        kp, hp, _ = branch_values(surface, chart, s, nu_p, kappa_nu_p, tol)
        km, hm, _ = branch_values(surface, chart, -s, nu_p, kappa_nu_p, tol)
        kap_avg.append(0.5 * (kp + km))
        hat_avg.append(0.5 * (hp + hm))
        dv.append((kp - km) / (2 * s))
    kappa, _ = richardson(kap_avg)
    hat, hat_err = richardson(hat_avg)
    dvk, dv_err = richardson(dv)
    # the branches must stay apart near the axis
    ambiguous = False
    for s in (1e-3, -1e-3):
        _, _, (a, b) = branch_values(surface, chart, s, nu_p, kappa_nu_p, tol)
        if abs(a - b) <= 10 * abs(min(abs(a - kappa_nu_p), abs(b - kappa_nu_p))):
            ambiguous = True
    return BoundedCurvatureData(kappa, hat, dvk, hat_err, dv_err, ambiguous)
