import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspedge import jets as J
from cuspedge.errors import AxisVanishingError
from cuspedge.expr import eval_jet, eval_scalar, parse_expression
from cuspedge.jets import Jet1, Jet2, JetVec3

ORDER = 5


def uv(order=ORDER):
    return Jet2.variable(0, 0.0, order), Jet2.variable(1, 0.0, order)


def surface_jet(x, y, z, order=ORDER, base=(0.0, 0.0)):
    return JetVec3(*(eval_jet(parse_expression(e), base, order) for e in (x, y, z)))


def test_coefficient_count():
    for n in range(7):
        assert Jet2.constant(1.0, n).coeffs.size == (n + 1) * (n + 2) // 2


def test_product_of_linear_factors():
    u, v = uv(2)
    p = (1 + u) * (1 + v)
    assert p.allclose(Jet2.from_dict({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}, 2), atol=0)


def test_geometric_series():
    u, _ = uv(3)
    g = 1 / (1 - u)
    assert [g.coef(k, 0) for k in range(4)] == [1, 1, 1, 1]


def test_self_subtraction_is_zero():
    u, v = uv()
    assert not np.any((u + v - (u + v)).coeffs)


def test_sqrt_constant_and_binomial():
    u, _ = uv(2)
    assert J.apply("sqrt", 4 + 0 * u).allclose(Jet2.constant(2.0, 2))
    s = J.apply("sqrt", 1 + u)
    assert [s.coef(0, 0), s.coef(1, 0), s.coef(2, 0)] == pytest.approx([1, 0.5, -0.125])


def test_pow_const_value():
    _, v = uv(0)
    assert J.apply("pow_const", 4 + 9 * v * v, 1.25).value == pytest.approx(4 ** 1.25, rel=1e-15)


def test_plug_curve_examples():
    t = Jet1.variable(0.0, 4)
    F = eval_jet(parse_expression("u^2 + v^2"), (0.0, 0.0), 4)
    g = J.plug_curve(F, t, t * t, (0.0, 0.0))
    assert [g.coef(k) for k in range(5)] == pytest.approx([0, 0, 1, 0, 1])
    F = eval_jet(parse_expression("u*v"), (0.0, 1.0), 4)
    g = J.plug_curve(F, t, 1 + t, (0.0, 1.0))
    assert [g.coef(k) for k in range(3)] == pytest.approx([0, 1, 1])
    F = eval_jet(parse_expression("sin(u)"), (0.0, 0.0), 3)
    g = J.plug_curve(F, t.truncate(3), 0 * t.truncate(3), (0.0, 0.0))
    assert [g.coef(k) for k in range(4)] == pytest.approx([0, 1, 0, -1 / 6])


def test_partials():
    assert eval_jet(parse_expression("v^3/3"), (0, 0), 3).partial(0, 3) == pytest.approx(2)
    assert eval_jet(parse_expression("u*v"), (0, 0), 2).partial(1, 1) == 1
    assert eval_jet(parse_expression("u^4"), (1, 0), 2).partial(2, 0) == 12


def test_divide_by_v_examples():
    f = surface_jet("u", "v^2", "v^3")
    h = f.deriv(0, 1).divide_by_v()
    assert np.allclose(h.coef(0, 0), [0, 2, 0]) and np.allclose(h.coef(0, 1), [0, 0, 3])
    F = surface_jet("u*v", "v^2", "v^3")
    q = F.divide_by_v()
    assert np.allclose(q.coef(1, 0), [1, 0, 0]) and np.allclose(q.coef(0, 1), [0, 1, 0])
    assert np.allclose(q.coef(0, 2), [0, 0, 1])
    with pytest.raises(AxisVanishingError):
        surface_jet("u", "0", "0").divide_by_v()


def test_vector_operations():
    like = Jet2.constant(0.0, 1)
    e1, e2 = JetVec3.constant([1, 0, 0], like), JetVec3.constant([0, 1, 0], like)
    assert np.allclose(J.cross(e1, e2).value, [0, 0, 1])
    d = J.det3(e1, JetVec3.constant([0, 2, 0], like), JetVec3.constant([0, 0, 6], like))
    assert d.value == 12
    assert J.norm(JetVec3.constant([0, 0, 2], like)).value == 2


coeff = st.floats(-1, 1, allow_nan=False)


def random_jet(seed, order=ORDER):
    r = np.random.default_rng(seed)
    return Jet2(r.uniform(-1, 1, (order + 1) * (order + 2) // 2), order)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_ring_axioms(seed):
    a, b, c = (random_jet(seed + k) for k in range(3))
    assert np.max(np.abs(((a * b) * c - a * (b * c)).coeffs)) < 1e-12
    assert np.max(np.abs((a * (b + c) - (a * b + a * c)).coeffs)) < 1e-12
    assert np.max(np.abs((a * b - b * a).coeffs)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_division_inverts_product(seed):
    a, b = random_jet(seed), random_jet(seed + 1)
    b = b + (3.0 - b.value)
    assert np.max(np.abs(((a * b) / b - a).coeffs)) < 1e-11


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_exp_log_inverse(seed):
    a = random_jet(seed)
    a = a + (2.0 - a.value)
    assert np.max(np.abs((J.apply("exp", J.apply("log", a)) - a).coeffs)) < 1e-11


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_divide_by_v_round_trip(seed):
    a = random_jet(seed)
    a.coeffs[[J._idx(i, 0) for i in range(ORDER + 1)]] = 0.0
    _, v = uv()
    q = a.divide_by_v()
    back = q * v
    for d in range(ORDER):
        for j in range(1, d + 1):
            assert back.coef(d - j, j) == a.coef(d - j, j)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_det3_alternating(seed):
    r = np.random.default_rng(seed)
    vecs = [JetVec3(*(Jet2(r.uniform(-1, 1, 21), 5) for _ in range(3))) for _ in range(3)]
    d1 = J.det3(*vecs)
    d2 = J.det3(vecs[1], vecs[0], vecs[2])
    assert np.max(np.abs(d1.coeffs + d2.coeffs)) < 1e-13


def test_plug_curve_matches_scalar_along_curve():
    ast = parse_expression("sin(u) * exp(v) + u^2 * v")
    base = (0.2, -0.1)
    F = eval_jet(ast, base, 8)
    t = Jet1.variable(0.0, 8)
    U = base[0] + 0.3 * t + 0.1 * t * t
    V = base[1] - 0.2 * t + 0.05 * t * t * t
    g = J.plug_curve(F, U, V, base)
    for s in np.random.default_rng(1).uniform(-0.05, 0.05, 20):
        u = base[0] + 0.3 * s + 0.1 * s * s
        v = base[1] - 0.2 * s + 0.05 * s ** 3
        assert abs(g.evaluate(s) - eval_scalar(ast, u, v)) < 1e-10


def test_order_truncates_to_minimum():
    a, b = Jet2.constant(1.0, 5), Jet2.constant(1.0, 3)
    assert (a * b).order == 3 and (a + b).order == 3


def test_jet1_calculus():
    t = Jet1.variable(0.0, 5)
    e = J.apply("exp", t)
    assert e.deriv().allclose(e.truncate(4))
    assert e.deriv().integrate(1.0).allclose(e)
    assert (t * e).divide_by_t().allclose(e.truncate(4))
