import math

import pytest

from ris_saturation import ArrayGeometry, PasModel

deg = math.radians


@pytest.fixture
def half_wave():
    return ArrayGeometry(8, spacing=0.5)


@pytest.fixture
def gauss3():
    return PasModel.gaussian(math.pi / 4, deg(3))


@pytest.fixture
def lap23():
    return PasModel.laplacian(math.pi / 4, deg(23))


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def record(request):
    """``record(k, ok, detail)`` logs one acceptance line and asserts ``ok``."""
    lines = request.config.stash[_ACCEPTANCE]

    def _record(k, ok, detail):
        lines.append(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
