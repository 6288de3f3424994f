import pytest

from commonpairs import _backend, _pycore

try:
    from commonpairs import _core
except ImportError:  # extension not built
    _core = None

BACKENDS = ["python"] + (["compiled"] if _core is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available backend of the hot kernels."""
    monkeypatch.setattr(_backend, "core", _core if request.param == "compiled" else _pycore)
    return request.param


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
