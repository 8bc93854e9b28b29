import importlib

import numpy as np
import pytest

import polygonflow.harmonic
import polygonflow.polygon
from polygonflow import _pykernels

_BACKENDS = {"python": _pykernels}
try:
    _BACKENDS["cython"] = importlib.import_module("polygonflow._ckernels")
except ImportError:
    pass


@pytest.fixture(params=sorted(_BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    mod = _BACKENDS[request.param]
    monkeypatch.setattr(polygonflow.polygon, "kernels", mod)
    monkeypatch.setattr(polygonflow.harmonic, "kernels", mod)
    return request.param


@pytest.fixture
def unit_square():
    return polygonflow.polygon.make_polygon([1, -1, -1, 1], [1, 1, -1, -1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
