"""Shared fixtures: the standard deformation points and the acceptance summary lines."""

from fractions import Fraction

import pytest

from rpqw.deform import classical_limit, make_deformation

_CRITERIA: dict[int, list[tuple[str, str]]] = {}


@pytest.fixture
def pq():
    return make_deformation("pq", "2/3", "1/5")


@pytest.fixture
def qfam():
    return make_deformation("q", None, "1/3")


@pytest.fixture
def classical():
    return classical_limit()


@pytest.fixture
def custom():
    # R(u, v) = (u - v)/(p - q) + (u - 1)(v - 1), written as a Laurent table
    p, q = Fraction(2, 3), Fraction(1, 5)
    c = 1 / (p - q)
    terms = [(1, 0, c), (0, 1, -c), (1, 1, 1), (1, 0, -1), (0, 1, -1), (0, 0, 1)]
    return make_deformation("custom", p, q, terms=terms)


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test body sets ``detail`` on the returned dict."""
    number = request.node.get_closest_marker("criterion").args[0]
    info = {"detail": ""}
    yield info
    rep = getattr(request.node, "rep_call", None)
    status = "PASS" if rep is not None and rep.passed else "FAIL"
    _CRITERIA.setdefault(number, []).append((status, info["detail"]))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        parts = _CRITERIA[number]
        status = "PASS" if all(s == "PASS" for s, _ in parts) else "FAIL"
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
