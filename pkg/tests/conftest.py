import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from leibniz.field import Field  # noqa: E402

DATA = os.path.join(os.path.dirname(__file__), "data")

_criteria: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = getattr(report, "criterion", None)
    if name:
        _criteria.setdefault(name, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker:
        rep.criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s[1:])):
        outcomes = _criteria[name]
        ok = all(o == "passed" for o in outcomes)
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'} ({len(outcomes)} checks)")


@pytest.fixture
def Q():
    return Field.rational()


@pytest.fixture
def F2():
    return Field.prime(2)


@pytest.fixture
def F3():
    return Field.prime(3)


@pytest.fixture
def F5():
    return Field.prime(5)


def data_path(name):
    return os.path.join(DATA, name)


def random_array(F, rng, shape, density=1.0):
    vals = rng.integers(-3, 4, size=shape) if F.p is None else rng.integers(0, F.p, size=shape)
    if density < 1.0:
        vals = vals * (rng.random(shape) < density)
    return F.array(vals)
