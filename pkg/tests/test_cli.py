import csv
import io
import json

import pytest

from cuspedge.cli import main
from cuspedge.errors import SurfaceFileError
from cuspedge.report import CSV_COLUMNS
from cuspedge.surfacefile import fixture_path, load_surface_file, parse_surface_text

GOOD = """\
# comment
[surface]
name = demo
x = u
y = v^2
z = v^3
u_range = -1 1
v_range = -1 1
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_load_fixture_files():
    cyc = load_surface_file(fixture_path("cycloid"))
    assert cyc.source["x"] == "(2+cos(u))*cos(v)"
    assert load_surface_file(fixture_path("fplus")).name == "fplus"


def test_parse_surface_text():
    s = parse_surface_text(GOOD)
    assert s.name == "demo" and s.co_orientation == 1 and s.u_range == (-1.0, 1.0)


def test_missing_key():
    with pytest.raises(SurfaceFileError, match="missing key z"):
        parse_surface_text(GOOD.replace("z = v^3\n", ""), "t.surf")


def test_error_location():
    text = GOOD.replace("y = v^2", "y = v^^2")
    with pytest.raises(SurfaceFileError) as exc:
        parse_surface_text(text, "t.surf")
    assert str(exc.value).startswith("t.surf:5:")
    assert exc.value.line == 5 and exc.value.column == 7


@pytest.mark.parametrize("bad, msg", [
    ("co_orientation = 2\n", "co_orientation"),
    ("colour = red\n", "unknown key"),
    ("x = 1\n", "duplicate key"),
    ("u_range = 1\n", None),
])
def test_bad_files(bad, msg):
    text = GOOD.replace("u_range = -1 1\n", "") if bad.startswith("u_range") else GOOD
    with pytest.raises(SurfaceFileError, match=msg):
        parse_surface_text(text + bad)


def test_missing_file(tmp_path):
    code, _, err = run("analyze", str(tmp_path / "nope.surf"))
    assert code == 3 and "cannot read" in err


def test_bad_surface_exit_code(tmp_path):
    p = tmp_path / "bad.surf"
    p.write_text(GOOD.replace("x = u", "x = sin(u"))
    assert run("verify", str(p))[0] == 3


def test_analyze_fplus_csv():
    code, out, _ = run("analyze", "fixture:fplus")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0].keys()) == list(CSV_COLUMNS) + ["flags"]
    row = min(rows, key=lambda r: abs(float(r["t"])))
    got = [float(row[k]) for k in ("kappa_s", "kappa_nu", "kappa_c", "kappa_t", "kappa_t_p", "K_limit")]
    assert got == pytest.approx([6, 0, 2, 0, 4, -6], abs=1e-6)


def test_analyze_sphere_exit_2():
    code, out, err = run("analyze", "fixture:sphere")
    assert code == 2 and "no singular points" in err
    assert out.strip() == ",".join(CSV_COLUMNS) + ",flags"


def test_analyze_cycloid_rows():
    code, out, _ = run("analyze", "fixture:cycloid")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) >= 50
    assert max(abs(float(r["kappa_t"])) for r in rows) < 1e-8


def test_unbounded_csv_has_no_nan():
    code, out, _ = run("analyze", "fixture:unbounded")
    assert code == 0 and "nan" not in out.lower() and "inf" not in out.lower()
    assert all(r["K_limit"] == "" and "unbounded_K" in r["flags"] for r in csv.DictReader(io.StringIO(out)))


@pytest.mark.parametrize("name, cls, sign, mu", [
    ("fplus", "cusp", "zig", 6.0), ("fminus", "cusp", "zag", -6.0),
    ("cycloid", "nondegenerate_other", "none", None), ("unbounded", "unsupported", "none", None)])
def test_classify(name, cls, sign, mu):
    code, out, _ = run("classify", f"fixture:{name}")
    entries = json.loads(out)
    assert code == 0 and entries[0]["class"] == cls and entries[0]["cusp_sign"] == sign
    if mu is not None:
        assert entries[0]["mu_nu"] == pytest.approx(mu, abs=1e-6)


def test_verify_json_and_output_dir(tmp_path):
    code, _, err = run("verify", "fixture:cycloid", "--output", str(tmp_path))
    assert code == 0 and "0 failed" in err
    rep = json.loads((tmp_path / "cycloid_verify.json").read_text())
    assert set(rep) == {"surface", "curves", "classifications", "checks", "tolerances", "version"}
    cone = [c for c in rep["checks"] if c["name"] == "cone_point"]
    assert cone[0]["status"] == "passed"


def test_verify_v4_rejected():
    code, _, err = run("verify", "fixture:v4")
    assert code == 2 and "not a front" in err


def test_tolerance_override_fails_checks():
    code, _, err = run("verify", "fixture:fplus", "--tol-K", "1e-30")
    assert code == 1 and "FAILED" in err


def test_mesh(tmp_path):
    code, _, _ = run("mesh", "fixture:fplus", "--grid", "8", "--output", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fplus_edge.obj", "fplus_gauss.obj", "fplus_gauss_edge.obj", "fplus_surface.obj"]
    lines = (tmp_path / "fplus_surface.obj").read_text().splitlines()
    assert sum(1 for x in lines if x.startswith("v ")) == 64
    assert sum(1 for x in lines if x.startswith("f ")) == 49
    assert all(x.split()[0] in ("#", "v", "f", "l") for x in lines)


def test_sphere_gauss_mesh_is_scaled_surface():
    code, out, _ = run("mesh", "fixture:sphere", "--grid", "6")
    assert code == 0
    blocks = out.split("# --- ")
    surf = [list(map(float, l.split()[1:])) for l in blocks[2].splitlines() if l.startswith("v ")]
    gauss = [list(map(float, l.split()[1:])) for l in blocks[1].splitlines() if l.startswith("v ")]
    for p, n in zip(surf, gauss):
        assert p == pytest.approx([2 * x for x in n], abs=1e-6) or p == pytest.approx([-2 * x for x in n], abs=1e-6)


def test_mesh_deterministic():
    assert run("mesh", "fixture:cycloid", "--grid", "8")[1] == run("mesh", "fixture:cycloid", "--grid", "8")[1]
