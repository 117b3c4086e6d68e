import sys

import numpy as np
import pytest

from sparsebounds import _backend, _fallback

_FUNCS = ("cross_dot", "cross_sqdist", "sym_dot", "sym_sqdist", "cholesky", "cho_solve", "jacobi")


@pytest.fixture(params=["default", "python"])
def backend(request, monkeypatch):
    """Run a test with the import-time backend and again with the numpy fallback."""
    if request.param == "python":
        for name in _FUNCS:
            monkeypatch.setattr(_backend, name, getattr(_fallback, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    """Print the one-line verdict of every acceptance criterion that ran."""
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
