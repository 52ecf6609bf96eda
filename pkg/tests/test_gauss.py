import numpy as np
import pytest

from cuspedge import load_fixture
from cuspedge.errors import UnboundedCurvatureError, UnsupportedClassification
from cuspedge.gauss import (
    GaussClass,
    check_bounded_curvature,
    check_theorem_A,
    check_theorem_B_and_corollary,
    classify,
    cone_point_check,
    cusp_sign_via_invariants,
    frame_identity_checks,
    gauss_locus_jets,
    is_nondegenerate_gauss_singularity,
    probe_K,
    special_identity_residuals,
)

from conftest import fixture_report, local_analysis


def analysis(name):
    s = load_fixture(name)
    return local_analysis(s, *s.points[0])


@pytest.mark.parametrize("name, cls, sign", [
    ("fplus", GaussClass.CUSP, "zig"),
    ("fminus", GaussClass.CUSP, "zag"),
    ("cycloid", GaussClass.NONDEGENERATE_OTHER, "none"),
    ("normal_form", GaussClass.DEGENERATE, "none"),
])
def test_classification(name, cls, sign):
    g = classify(analysis(name))
    assert g.cls == cls and g.cusp_sign == sign
    if cls == GaussClass.CUSP:
        assert g.mu_nu != 0


def test_unbounded_is_unsupported():
    pa = analysis("unbounded")
    with pytest.raises(UnsupportedClassification):
        classify(pa)
    assert classify(pa, allow_unbounded=True).cls == GaussClass.REGULAR


def test_gauss_locus_fplus():
    pa = analysis("fplus")
    c = gauss_locus_jets(pa).c
    t = np.array([c.x.coef(k) for k in range(4)]), np.array([c.y.coef(k) for k in range(4)])
    assert np.allclose(t[0], [0, 0, 0, 8], atol=1e-9)
    assert np.allclose(t[1], [0, 0, -2, 0], atol=1e-9)
    assert c.z.value == pytest.approx(1.0)


def test_gauss_locus_cycloid_constant():
    c = gauss_locus_jets(analysis("cycloid")).c
    assert np.allclose(np.abs(c.value), [0, 0, 1], atol=1e-12)
    for comp in c.components:
        assert np.max(np.abs(comp.coeffs[1:])) < 1e-9


def test_gauss_locus_unbounded_errors():
    with pytest.raises(UnboundedCurvatureError):
        gauss_locus_jets(analysis("unbounded"))


@pytest.mark.parametrize("name, expected, q", [
    ("fplus", True, 24.0), ("cycloid", True, 1 / 3), ("normal_form", False, 0.0)])
def test_nondegeneracy(name, expected, q):
    ok, w = is_nondegenerate_gauss_singularity(analysis(name))
    assert ok == expected
    assert w["nondegeneracy_quantity"] == pytest.approx(q, abs=1e-9)
    assert w["direct"] == expected


@pytest.mark.parametrize("name, mu", [("fplus", 6.0), ("fminus", -6.0)])
def test_cusp_sign_closed_form(name, mu):
    pa = analysis(name)
    assert cusp_sign_via_invariants(pa) == pytest.approx(mu, abs=1e-6)
    assert pa.cusp_data.mu == pytest.approx(mu, abs=1e-9)


@pytest.mark.parametrize("name", ["fplus", "fminus"])
def test_normal_flip_keeps_cusp_sign(name):
    s = load_fixture(name)
    a, b = classify(local_analysis(s)), classify(local_analysis(s.flipped()))
    assert (a.cls, a.cusp_sign) == (b.cls, b.cusp_sign)
    assert a.mu_nu == pytest.approx(b.mu_nu, rel=1e-9)


@pytest.mark.parametrize("name", ["fplus", "fminus", "cycloid"])
def test_theorem_A(name):
    e = check_theorem_A(analysis(name))
    assert e.hypotheses_met and e.conclusion_holds
    assert e.witnesses["probe_count"] == 100


def test_theorem_A_probe_signs():
    assert np.all(probe_K(analysis("fminus")) > 0)
    assert np.all(probe_K(analysis("fplus")) < 0)
    assert np.all(probe_K(analysis("cycloid")) < 0)


def test_theorem_B():
    for name in ("fplus", "fminus"):
        e = check_theorem_B_and_corollary(analysis(name))
        assert e.status == "passed"
    assert check_theorem_B_and_corollary(analysis("cycloid")).status == "hypotheses_not_met"


def test_theorem_checks_skip_unbounded():
    pa = analysis("unbounded")
    for fn in (check_theorem_A, check_theorem_B_and_corollary):
        assert fn(pa).status == "hypotheses_not_met"
    e = check_bounded_curvature(pa)
    assert e.status == "passed" and not e.witnesses["K_bounded"]


def test_cone_point():
    ca = fixture_report("cycloid").curves[0]
    e = cone_point_check(ca.curve, ca.invariants, K_limit=-1 / 12)
    assert e.status == "passed"
    assert e.witnesses["diameter"] < 1e-8
    assert np.allclose(np.abs(e.witnesses["locus"]), [0, 0, 1], atol=1e-12)


def test_cone_point_hypotheses():
    ca = fixture_report("fplus").curves[0]
    assert cone_point_check(ca.curve, ca.invariants, K_limit=-6.0).status == "hypotheses_not_met"
    ca = fixture_report("normal_form").curves[0]
    assert cone_point_check(ca.curve, ca.invariants, K_limit=0.0).status == "hypotheses_not_met"


def test_frame_identities():
    for name in ("fplus", "normal_form", "cycloid"):
        pa = analysis(name)
        e = frame_identity_checks(pa.curve, 0.0)
        assert e.conclusion_holds, e.witnesses
    ch = analysis("cycloid").special
    assert np.linalg.norm(ch.nu.partial(0, 1)) == pytest.approx(0.5, abs=1e-9)


def test_special_identities():
    for name in ("fplus", "fminus", "cycloid"):
        r = special_identity_residuals(analysis(name).special)
        assert max(r.values()) < 1e-6


def test_degeneracy_consistency():
    for name in ("fplus", "fminus", "cycloid", "normal_form"):
        pa = analysis(name)
        degenerate = classify(pa).cls == GaussClass.DEGENERATE
        assert degenerate == (not is_nondegenerate_gauss_singularity(pa)[0])


def test_evidence_fields():
    g = classify(analysis("fplus"))
    for k in ("kappa_s", "kappa_t", "kappa_t_p", "kappa_nu_p", "nondegeneracy_quantity", "mu_nu", "K_limit"):
        assert k in g.evidence
    assert g.evidence["K_limit"] == pytest.approx(-6.0)
