"""Acceptance criteria 1-8.

Each criterion records one PASS/FAIL line, printed in the terminal summary.
"""

import io
import json
import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from cuspedge import load_fixture
from cuspedge.cli import main
from cuspedge.expr import parse_expression
from cuspedge.frontal import adapted_unit_normal, area_density_and_discriminant, curvatures_at, unit_normal
from cuspedge.gauss import (
    GaussClass,
    PointAnalysis,
    check_theorem_A,
    classify,
    cone_point_check,
    cusp_sign_via_invariants,
    is_nondegenerate_gauss_singularity,
    probe_K,
    special_identity_residuals,
    weingarten_residuals,
)
from cuspedge.invariants import invariants_at
from cuspedge.singular import is_cuspidal_edge

from conftest import fixture_report, local_analysis

RESULTS = {}

# pinned tolerances
TOL_KS = 1e-6
TOL_KNU = 1e-8
TOL_KT0 = 1e-8
TOL_KT_HALF = 1e-6
TOL_KTP = 1e-3
TOL_MU_ABS = 1e-3
TOL_MU_REL = 1e-4
TOL_LIMIT = 1e-6
TOL_CYC_K = 1e-8
TOL_CYC_INV = 1e-6
TOL_POINT = 1e-8
TOL_NF = 1e-8
TOL_INVARIANCE = 1e-6
TOL_FLIP = 1e-10
TOL_ID = 1e-6
TOL_KHAT = 1e-5
TOL_DVK = 1e-4


def record(n, ok, detail):
    prev = RESULTS.get(n)
    if prev is not None:
        ok = ok and prev[0]
        detail = prev[1] + "; " + detail
    RESULTS[n] = (bool(ok), detail)
    return ok


def even_samples(invs, count=50):
    idx = np.linspace(0, len(invs) - 1, count).round().astype(int)
    return [invs[i] for i in idx]


# -- 1 ------------------------------------------------------------------------


@pytest.mark.parametrize("name, sign", [("fplus", 1), ("fminus", -1)])
def test_criterion_1_fpm_invariants(name, sign):
    ca = fixture_report(name).curves[0]
    pa = PointAnalysis(ca.curve, ca.curve.point_near(0.0, 0.0)[1])
    inv = pa.invariants
    g = classify(pa)
    mu_sph = g.mu_nu
    mu_cf = cusp_sign_via_invariants(pa)
    kn = max(abs(i.kappa_nu) for i in even_samples(ca.invariants))
    checks = {
        "kappa_s": abs(inv.kappa_s - 6 * sign) < TOL_KS,
        "kappa_nu": kn < TOL_KNU,
        "kappa_t(0)": abs(inv.kappa_t) < TOL_KT0,
        "kappa_t'": abs(inv.kappa_t_p - 4 * sign) < TOL_KTP,
        "class": g.cls == GaussClass.CUSP and g.cusp_sign == ("zig" if sign > 0 else "zag"),
        "mu_spherical": abs(mu_sph - 6 * sign) < TOL_MU_ABS,
        "mu_closed_form": abs(mu_cf - 6 * sign) < TOL_MU_ABS,
        "mu_agree": abs(mu_sph - mu_cf) <= TOL_MU_REL * abs(mu_sph),
    }
    bad = [k for k, v in checks.items() if not v]
    record(1, not bad, f"{name}: kappa_s={inv.kappa_s:.9g} kappa_t'={inv.kappa_t_p:.9g} "
                       f"mu={mu_sph:.9g}/{mu_cf:.9g} max|kappa_nu|={kn:.2e} {g.cls.value}/{g.cusp_sign}"
                       + (f" failing={bad}" if bad else ""))
    assert not bad, bad


def _kappa_t_half(name):
    ca = fixture_report(name).curves[0]
    return invariants_at(ca.curve, ca.curve.point_near(0.5, 0.0)[1]).kappa_t


@pytest.mark.xfail(strict=True, reason="1/3 contradicts the closed form 4u/(1+4u^4+64u^6) = 8/9 at u = 0.5")
@pytest.mark.parametrize("name, sign", [("fplus", 1), ("fminus", -1)])
def test_criterion_1_torsion_at_half_as_stated(name, sign):
    kt = _kappa_t_half(name)
    ok = abs(kt - sign / 3) < TOL_KT_HALF
    record(1, ok, f"{name}: kappa_t(0.5)={kt:.12g}, expected {sign}/3")
    assert ok


@pytest.mark.parametrize("name, sign", [("fplus", 1), ("fminus", -1)])
def test_criterion_1_torsion_at_half_corrected(name, sign):
    kt = _kappa_t_half(name)
    assert abs(kt - sign * 8 / 9) < TOL_KT_HALF


# -- 2 ------------------------------------------------------------------------


@pytest.mark.parametrize("name, sign", [("fplus", 1), ("fminus", -1)])
def test_criterion_2_limit_curvature(name, sign):
    pa = local_analysis(load_fixture(name))
    closed = pa.K_limit_closed
    numeric, _ = pa.K_limit_numeric
    K = probe_K(pa, 100)
    thm = check_theorem_A(pa)
    ok = (abs(closed + 6 * sign) < TOL_LIMIT and abs(closed - numeric) < TOL_LIMIT
          and K.size == 100 and bool(np.all(np.sign(K) == -sign)) and thm.status == "passed")
    record(2, ok, f"{name}: closed={closed:.9g} numeric={numeric:.9g} probes "
                  f"[{K.min():.4g}, {K.max():.4g}] theorem_A={thm.status}")
    assert ok


# -- 3 ------------------------------------------------------------------------


def test_criterion_3_cycloid():
    s = load_fixture("cycloid")
    rng = np.random.default_rng(3)
    worst_K = 0.0
    for u, v in zip(rng.uniform(0.2, 5.8, 20) * rng.choice([-1, 1], 20), rng.uniform(0, 2 * math.pi, 20)):
        K = curvatures_at(s, u, v).K
        ref = -1 / (4 * (2 + math.cos(u)))
        worst_K = max(worst_K, abs(K - ref) / abs(ref))
    ca = fixture_report("cycloid").curves[0]
    pa = PointAnalysis(ca.curve, ca.curve.point_near(0.0, math.pi)[1])
    lim = pa.K_limit_closed
    num, _ = pa.K_limit_numeric
    inv = even_samples(ca.invariants)
    e_s = max(abs(abs(i.kappa_s) - 1 / 3) for i in inv)
    e_c = max(abs(abs(i.kappa_c) - 1) for i in inv)
    e_t = max(abs(i.kappa_t) for i in inv)
    cone = cone_point_check(ca.curve, ca.invariants, K_limit=lim)
    locus = np.array(cone.witnesses.get("locus", [np.nan] * 3))
    ok = (worst_K < TOL_CYC_K and abs(lim + 1 / 12) < TOL_LIMIT and abs(num + 1 / 12) < TOL_LIMIT
          and max(e_s, e_c, e_t) < TOL_CYC_INV and cone.status == "passed"
          and cone.witnesses["diameter"] < TOL_POINT
          and np.allclose(np.abs(locus), [0, 0, 1], atol=TOL_POINT))
    record(3, ok, f"K rel err={worst_K:.2e} K_limit={lim:.12g}/{num:.12g} "
                  f"inv errs=({e_s:.1e},{e_c:.1e},{e_t:.1e}) cone diam={cone.witnesses.get('diameter')}")
    assert ok


# -- 4 ------------------------------------------------------------------------


def test_criterion_4_normal_form():
    s = load_fixture("normal_form")
    ca = fixture_report("normal_form").curves[0]
    pa = PointAnalysis(ca.curve, ca.curve.point_near(0.0, 0.0)[1])
    edge, _ = is_cuspidal_edge(pa.point)
    inv = pa.invariants
    lam_max = 0.0
    for u, v in ((0.0, 0.0), (0.3, 0.2), (-0.5, -0.4)):
        f = s.jet(u, v, 4)
        nu = adapted_unit_normal(f)[0] if v == 0.0 else unit_normal(f)
        _, Lam = area_density_and_discriminant(f, nu)
        lam_max = max(lam_max, float(np.max(np.abs(Lam.coeffs))))
    g = classify(pa)
    ok = (edge and abs(pa.point.eta_lambda - 2) < TOL_NF
          and max(abs(inv.kappa_s), abs(inv.kappa_nu), abs(inv.kappa_t)) < TOL_NF
          and abs(inv.kappa_c - 3 / math.sqrt(2)) < TOL_NF and lam_max < TOL_NF
          and g.cls == GaussClass.DEGENERATE)
    record(4, ok, f"eta_lambda={pa.point.eta_lambda:.12g} kappa_c={inv.kappa_c:.12g} "
                  f"max|Lambda coeff|={lam_max:.1e} class={g.cls.value}")
    assert ok


# -- 5 ------------------------------------------------------------------------


def _signature(pa):
    g = classify(pa)
    inv = pa.invariants
    return np.array([inv.kappa_s, inv.kappa_nu, inv.kappa_c, inv.kappa_t, g.mu_nu]), (g.cls, g.cusp_sign)


def _rel_diff(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))


def _random_reparametrization(rng):
    # u = alpha(u'), v = v' beta(u') with alpha(0) = 0, alpha' > 0, beta > 0
    a1 = float(rng.uniform(0.5, 2.0))
    a2, a3 = (float(x) for x in rng.uniform(-0.5, 0.5, 2))
    b0 = float(rng.uniform(0.5, 2.0))
    b1, b2 = (float(x) for x in rng.uniform(-0.3, 0.3, 2))
    uo = parse_expression(f"{a1!r}*u + {a2!r}*u^2 + {a3!r}*u^3")
    vo = parse_expression(f"v*({b0!r} + {b1!r}*sin(u) + {b2!r}*u^2)")
    return uo, vo


@pytest.mark.parametrize("name", ["fplus", "fminus"])
def test_criterion_5_invariance(name):
    rng = np.random.default_rng(5 if name == "fplus" else 55)
    s = load_fixture(name)
    ref, ref_cls = _signature(local_analysis(s))
    worst, mismatched = 0.0, 0
    for _ in range(50):
        uo, vo = _random_reparametrization(rng)
        t = s.reparametrized(uo, vo, (-0.2, 0.2), (-0.2, 0.2))
        sig, cls = _signature(local_analysis(t))
        worst = max(worst, _rel_diff(ref, sig))
        mismatched += cls != ref_cls
    for k in range(20):
        R = Rotation.random(random_state=int(rng.integers(2 ** 31))).as_matrix()
        t = s.rigid_motion(R, rng.uniform(-10, 10, 3))
        sig, cls = _signature(local_analysis(t))
        worst = max(worst, _rel_diff(ref, sig))
        mismatched += cls != ref_cls
    flip_sig, flip_cls = _signature(local_analysis(s.flipped()))
    flip_err = max(float(np.max(np.abs(flip_sig[[0, 2, 3]] - ref[[0, 2, 3]]))),
                   abs(flip_sig[1] + ref[1]))
    # kappa_nu flips: checked where it is non-zero
    u = load_fixture("unbounded")
    kn, kn_flip = local_analysis(u).invariants.kappa_nu, local_analysis(u.flipped()).invariants.kappa_nu
    flip_err = max(flip_err, abs(kn + kn_flip))
    ok = worst < TOL_INVARIANCE and not mismatched and flip_cls == ref_cls and flip_err < TOL_FLIP
    record(5, ok, f"{name}: 50 reparametrizations + 20 rigid motions, max rel diff={worst:.2e}, "
                  f"class mismatches={mismatched}, flip err={flip_err:.1e} (kappa_nu {kn:g} -> {kn_flip:g})")
    assert ok


# -- 6 ------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["fplus", "fminus", "cycloid"])
def test_criterion_6_special_identities(name):
    ca = fixture_report(name).curves[0]
    c = ca.curve
    lo, hi = c.extent()
    worst = 0.0
    for t in np.linspace(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo), 10):
        pa = PointAnalysis(c, float(t))
        r = special_identity_residuals(pa.special)
        r.update(weingarten_residuals(pa.special))
        worst = max(worst, max(r.values()))
    pa = PointAnalysis(c, c.point_near(*load_fixture(name).points[0])[1])
    bd = pa.bounded_data
    khat_err = abs(bd.kappa_hat - pa.invariants.kappa_c / 2)
    ok = worst < TOL_ID and khat_err < TOL_KHAT
    detail = f"{name}: max residual={worst:.1e} |khat - kappa_c/2|={khat_err:.1e}"
    if name == "fplus":
        ok = ok and abs(bd.dv_kappa + 6) < TOL_DVK
        detail += f" dv_kappa={bd.dv_kappa:.9g}"
    record(6, ok, detail)
    assert ok


# -- 7 ------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["fplus", "fminus", "cycloid"])
def test_criterion_7_nondegeneracy_cross_check(name):
    c = fixture_report(name).curves[0].curve
    lo, hi = c.extent()
    disagreements = 0
    for t in np.linspace(lo + 0.2 * (hi - lo), hi - 0.2 * (hi - lo), 5):
        lemma, w = is_nondegenerate_gauss_singularity(PointAnalysis(c, float(t)))
        disagreements += lemma != w["direct"]
    ok = disagreements == 0
    record(7, ok, f"{name}: 5 points, disagreements={disagreements}")
    assert ok


# -- 8 ------------------------------------------------------------------------


def _verify(name):
    out, err = io.StringIO(), io.StringIO()
    code = main(["verify", f"fixture:{name}"], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", ["fplus", "fminus", "cycloid", "normal_form", "unbounded"])
def test_criterion_8_determinism(name):
    a, b = _verify(name), _verify(name)
    ok = a == b and a[0] == 0
    record(8, ok, f"{name}: identical={a == b} exit={a[0]}")
    assert ok


def test_criterion_8_adversarial():
    code, _, err = _verify("v4")
    v4_ok = code == 2 and "not a front" in err
    code_u, out, _ = _verify("unbounded")
    rep = json.loads(out)
    theorem = [c for c in rep["checks"] if c["name"].startswith("theorem")]
    unbounded_ok = (code_u == 0 and not rep["curves"][0]["bounded_K"]
                    and theorem and all(c["status"] == "hypotheses_not_met" for c in theorem)
                    and rep["classifications"][0]["class"] == "unsupported")
    ok = v4_ok and unbounded_ok
    record(8, ok, f"v4 exit={code} rejected={v4_ok}; unbounded exit={code_u} flagged={unbounded_ok}")
    assert ok
