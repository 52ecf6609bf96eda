import sys
import functools

import numpy as np
import pytest

from cuspedge import load_fixture
from cuspedge.gauss import PointAnalysis
from cuspedge.report import analyze
from cuspedge.singular import analyze_point, trace_singular_curve


@functools.lru_cache(maxsize=None)
def fixture_report(name):
    """Full scan and trace of a bundled fixture (cached across tests)."""
    return analyze(load_fixture(name))


def local_analysis(surface, u=0.0, v=0.0, step=0.05, length=0.2):
    """Point analysis on a short trace through (u, v); no grid scan."""
    seed = analyze_point(surface, u, v)
    curve = trace_singular_curve(surface, seed, step=step, max_len=length)
    return PointAnalysis(curve, 0.0)


@pytest.fixture(scope="session")
def reports():
    return fixture_report


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
