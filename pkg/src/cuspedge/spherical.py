"""Curves on the unit sphere: covariant derivative, ordinary cusps, cuspidal curvature."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import jets as J
from .errors import DegenerateGaussMapError, NotSingularCurvePointError
from .jets import JetVec3
from .tolerances import DEFAULT, Tolerances


def covariant_derivative(X: JetVec3, c: JetVec3, check: float | None = 1e-9) -> JetVec3:
    """D_t X = X' - <X', c> c for a field X tangent to S^2 along c."""
    if check is not None:
        r = float(np.max(np.abs(J.dot(X, c).coeffs)))
        if r > check * max(1.0, float(np.linalg.norm(X.value))):
            raise ValueError(f"field is not tangent along the curve (residual {r:.3e})")
    Xp = X.deriv()
    cc = c.truncate(Xp.order)
    return Xp - cc * J.dot(Xp, cc)


@dataclass
class SphericalCurveJet:
    """Jet of a curve on S^2 together with c', D c' and D D c' at t0."""

    c: JetVec3

    def __post_init__(self):
        if self.c.order < 3:
            raise ValueError("spherical curve jets need order >= 3")
        r = float(np.max(np.abs((J.dot(self.c, self.c) - 1.0).coeffs)))
        if r > 1e-9:
            raise ValueError(f"curve is not on the unit sphere (residual {r:.3e})")

    @property
    def value(self) -> np.ndarray:
        return self.c.value

    def velocity(self) -> JetVec3:
        return self.c.deriv()

    def frame(self):
        """c, c', D_t c', D_t D_t c' at t0."""
        cd = self.c.deriv()
        d1 = covariant_derivative(cd, self.c)
        d2 = covariant_derivative(d1, self.c)
        return self.c.value, cd.value, d1.value, d2.value


@dataclass
class CuspData:
    is_singular: bool
    is_ordinary_cusp: bool
    mu: Optional[float]
    sign: str                 # 'zig', 'zag' or 'none'
    det: float
    dc_norm: float


def is_ordinary_cusp(curve: SphericalCurveJet, tol: Tolerances = DEFAULT) -> bool:
    c, cd, d1, d2 = curve.frame()
    n1 = float(np.linalg.norm(d1))
    if float(np.linalg.norm(cd)) > tol.tau_sing * max(1.0, n1):
        raise NotSingularCurvePointError(f"|c'| = {np.linalg.norm(cd):.3e} is not zero")
    if n1 <= tol.tau_sing:
        return False
    det = float(np.linalg.det(np.array([c, d1, d2])))
    return abs(det) / n1 ** 2.5 > tol.tau_cusp


def cuspidal_curvature(curve: SphericalCurveJet, tol: Tolerances = DEFAULT) -> CuspData:
    """mu = det(c, D c', D D c') / |D c'|^{5/2} at a singular point of c."""
    c, cd, d1, d2 = curve.frame()
    n1 = float(np.linalg.norm(d1))
    singular = float(np.linalg.norm(cd)) <= tol.tau_sing * max(1.0, n1)
    det = float(np.linalg.det(np.array([c, d1, d2])))
    if not singular:
        return CuspData(False, False, None, "none", det, n1)
    if n1 <= tol.tau_sing:
        raise DegenerateGaussMapError(f"|D c'| = {n1:.3e} vanishes: not an ordinary cusp")
    mu = det / n1 ** 2.5
    ordinary = abs(mu) > tol.tau_cusp
    sign = "none"
    if ordinary:
        sign = "zig" if mu > 0 else "zag"
    return CuspData(True, ordinary, mu if ordinary else None, sign, det, n1)
