"""Analysis pipeline shared by the CLI commands, and CSV / JSON / OBJ writers."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .errors import GeometryError
from .gauss import (
    GaussClass,
    GaussClassification,
    PointAnalysis,
    cone_point_check,
    run_point_checks,
    safe_classify,
)
from .invariants import curve_invariants, is_bounded_K, is_curvature_line
from .singular import SingularCurve, find_singular_curves
from .tolerances import DEFAULT, Tolerances

CSV_COLUMNS = ("t", "u", "v", "kappa_s", "kappa_nu", "kappa_c", "kappa_t",
               "kappa_nu_p", "kappa_t_p", "K_limit")


@dataclass
class CurveAnalysis:
    curve: SingularCurve
    invariants: list
    bounded: bool
    max_kappa_nu: float
    curvature_line: bool
    max_kappa_t: float

    def K_limit(self, inv) -> Optional[float]:
        """Closed-form limit of K at a sample; None where K is unbounded."""
        if not self.bounded or not math.isfinite(inv.kappa_s):
            return None
        return -(4 * inv.kappa_t ** 2 + inv.kappa_s * inv.kappa_c ** 2) / 4


@dataclass
class AnalysisReport:
    surface: object
    tol: Tolerances
    curves: list = field(default_factory=list)
    rejected: list = field(default_factory=list)
    classifications: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.curves


def analyze(surface, grid: int = 64, step: Optional[float] = None,
            tol: Tolerances = DEFAULT, order: int = 5) -> AnalysisReport:
    curves, rejected = find_singular_curves(surface, grid, step, tol, order)
    rep = AnalysisReport(surface, tol, rejected=rejected)
    for c in curves:
        invs = curve_invariants(c, tol)
        bounded, kn = is_bounded_K(c, invs, tol)
        line, kt = is_curvature_line(c, invs, tol)
        rep.curves.append(CurveAnalysis(c, invs, bounded, kn, line, kt))
    return rep


def analysis_points(rep: AnalysisReport, ca: CurveAnalysis) -> list[PointAnalysis]:
    """Points of interest on a curve: declared surface points on it, else the seed."""
    c = ca.curve
    h = float(np.median(np.abs(np.diff(c.t)))) if len(c) > 1 else 1e-2
    out = []
    for (u, v) in getattr(rep.surface, "points", ()):
        try:
            p, t = c.point_near(u, v)
        except (GeometryError, ArithmeticError):
            continue
        if math.hypot(p.u - u, p.v - v) < 2 * h:
            out.append(PointAnalysis(c, t, rep.tol))
    if not out:
        out.append(PointAnalysis(c, float(c.t[c.seed_index]), rep.tol))
    return out


def classify_report(rep: AnalysisReport) -> AnalysisReport:
    rep.classifications = []
    for k, ca in enumerate(rep.curves):
        for pa in analysis_points(rep, ca):
            if not ca.bounded:
                gc = GaussClassification(GaussClass.UNSUPPORTED, t=pa.t, u=pa.point.u,
                                         v=pa.point.v, evidence={"reason": "K unbounded",
                                                                "max_abs_kappa_nu": ca.max_kappa_nu})
            else:
                gc = safe_classify(pa)
            d = gc.as_dict()
            d["curve"] = k
            rep.classifications.append(d)
    return rep


def verify_report(rep: AnalysisReport, seed: int = 0) -> AnalysisReport:
    rep.checks = []
    for k, ca in enumerate(rep.curves):
        pas = analysis_points(rep, ca)
        for pa in pas:
            for e in run_point_checks(pa, seed):
                d = e.as_dict()
                d.update(curve=k, t=pa.t, u=pa.point.u, v=pa.point.v)
                rep.checks.append(d)
        pa = pas[0]
        klim = pa.K_limit_closed if (ca.bounded and pa.K_bounded_near) else None
        e = cone_point_check(ca.curve, ca.invariants, rep.tol, klim)
        d = e.as_dict()
        d.update(curve=k, t=None, u=None, v=None)
        rep.checks.append(d)
    return rep


def check_counts(rep: AnalysisReport) -> dict:
    out = {"passed": 0, "failed": 0, "hypotheses_not_met": 0}
    for c in rep.checks:
        out[c["status"]] += 1
    return out


# -- serialisation ------------------------------------------------------------


def _clean(x):
    """JSON-safe value: no NaN or Inf; unbounded limits become a string."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "unbounded"
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    return x


def _fmt(x) -> str:
    return repr(float(x))


def csv_text(rep: AnalysisReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS + ("flags",))
    for ca in rep.curves:
        for inv in ca.invariants:
            flags = list(inv.flags)
            row = [inv.t, inv.u, inv.v, inv.kappa_s, inv.kappa_nu, inv.kappa_c,
                   inv.kappa_t, inv.kappa_nu_p, inv.kappa_t_p]
            kl = ca.K_limit(inv)
            if kl is None:
                flags.append("unbounded_K")
            row.append(kl)
            cells = []
            for x in row:
                if x is None or not math.isfinite(x):
                    cells.append("")
                else:
                    cells.append(_fmt(x))
            w.writerow(cells + [";".join(flags)])
    return buf.getvalue()


def curve_dict(ca: CurveAnalysis) -> dict:
    samples = []
    for inv in ca.invariants:
        d = inv.as_dict()
        kl = ca.K_limit(inv)
        d["K_limit"] = kl if kl is not None else float("inf")
        d["flags"] = list(inv.flags)
        samples.append(d)
    c = ca.curve
    return {
        "closed": bool(c.closed), "stop_reasons": list(c.stop_reasons),
        "sample_count": len(c), "bounded_K": ca.bounded,
        "max_abs_kappa_nu": ca.max_kappa_nu, "curvature_line": ca.curvature_line,
        "max_abs_kappa_t": ca.max_kappa_t, "samples": samples,
    }


def report_dict(rep: AnalysisReport) -> dict:
    surf = rep.surface.describe()
    surf["rejected_nonfront_points"] = [[p.u, p.v] for p in rep.rejected]
    return _clean({
        "surface": surf,
        "curves": [curve_dict(ca) for ca in rep.curves],
        "classifications": rep.classifications,
        "checks": rep.checks,
        "tolerances": rep.tol.as_dict(),
        "version": __version__,
    })


def json_text(rep: AnalysisReport) -> str:
    return json.dumps(report_dict(rep), sort_keys=True, indent=2, allow_nan=False) + "\n"


# -- OBJ ----------------------------------------------------------------------


def _g(x: float) -> str:
    return "%.17g" % x


def _grid_normals(surface, n: int):
    """Unit normals on a cell-centred n x n grid, sign-aligned by flood fill."""
    u0, u1 = surface.u_range
    v0, v1 = surface.v_range
    us = u0 + (np.arange(n) + 0.5) * (u1 - u0) / n
    vs = v0 + (np.arange(n) + 0.5) * (v1 - v0) / n
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    hu, hv = 1e-6 * (u1 - u0), 1e-6 * (v1 - v0)
    fu = (surface.grid(uu + hu, vv) - surface.grid(uu - hu, vv)) / (2 * hu)
    fv = (surface.grid(uu, vv + hv) - surface.grid(uu, vv - hv)) / (2 * hv)
    raw = np.cross(fu, fv)
    nrm = np.linalg.norm(raw, axis=-1, keepdims=True)
    N = np.divide(raw, nrm, out=np.zeros_like(raw), where=nrm > 0)
    sign = np.zeros((n, n))
    seen = np.zeros((n, n), dtype=bool)
    sign[0, 0] = surface.co_orientation
    seen[0, 0] = True
    queue = deque([(0, 0)])
    while queue:
        i, j = queue.popleft()
        for a, b in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if 0 <= a < n and 0 <= b < n and not seen[a, b]:
                s = float(np.dot(N[i, j] * sign[i, j], N[a, b]))
                sign[a, b] = 1.0 if s >= 0 else -1.0
                seen[a, b] = True
                queue.append((a, b))
    return uu, vv, surface.grid(uu, vv), N * sign[..., None]


def _obj_grid(points: np.ndarray, header: str) -> str:
    n, m = points.shape[:2]
    lines = [f"# {header}"]
    for p in points.reshape(-1, 3):
        lines.append("v " + " ".join(_g(x) for x in p))
    for i in range(n - 1):
        for j in range(m - 1):
            a = i * m + j + 1
            lines.append(f"f {a} {a + m} {a + m + 1} {a + 1}")
    return "\n".join(lines) + "\n"


def _obj_polylines(polys: list, header: str) -> str:
    lines = [f"# {header}"]
    base = 1
    for P in polys:
        for p in P:
            lines.append("v " + " ".join(_g(x) for x in p))
        if len(P) > 1:
            lines.append("l " + " ".join(str(base + k) for k in range(len(P))))
        base += len(P)
    return "\n".join(lines) + "\n"


def mesh_texts(surface, rep: Optional[AnalysisReport], n: int = 64) -> dict:
    """OBJ file contents keyed by file suffix."""
    uu, vv, F, N = _grid_normals(surface, n)
    if rep is not None and rep.curves:
        # match the canonical normal of the first traced curve
        smp = rep.curves[0].curve.samples[rep.curves[0].curve.seed_index]
        i, j = np.unravel_index(np.argmin((uu - smp.u) ** 2 + (vv - smp.v) ** 2), uu.shape)
        if float(np.dot(N[i, j], smp.nu)) < 0:
            N = -N
    out = {
        "surface": _obj_grid(F, f"surface {surface.name}"),
        "gauss": _obj_grid(N, f"gauss image {surface.name}"),
    }
    if rep is not None:
        fc = [np.array([surface.point(s.u, s.v) for s in ca.curve.samples]) for ca in rep.curves]
        nc = [ca.curve.normals for ca in rep.curves]
        out["edge"] = _obj_polylines(fc, f"singular image {surface.name}")
        out["gauss_edge"] = _obj_polylines(nc, f"gauss singular locus {surface.name}")
    return out
