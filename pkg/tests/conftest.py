import pytest
from hypothesis import HealthCheck, settings

from hypercoarsen import _backend, _purepy

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BACKENDS = ["python"]
try:
    from hypercoarsen import _kernels

    BACKENDS.insert(0, "cython")
except ImportError:  # pragma: no cover
    _kernels = None


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = _kernels if request.param == "cython" else _purepy
    monkeypatch.setattr(_backend, "dinic", mod.dinic)
    monkeypatch.setattr(_backend, "gauss_seidel", mod.gauss_seidel)
    return request.param


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
