import pytest

from cubicmoments.family import enumerate_family
from cubicmoments.fields import FieldCtx
from cubicmoments.moments import FamilyData


@pytest.fixture(scope="session")
def ctx():
    return FieldCtx(5)


@pytest.fixture(scope="session")
def fam0(ctx):
    return enumerate_family(ctx, 0)


@pytest.fixture(scope="session")
def fam2(ctx):
    return enumerate_family(ctx, 2)


@pytest.fixture(scope="session")
def data0(fam0):
    return FamilyData.from_family(fam0)


@pytest.fixture(scope="session")
def data2(fam2):
    return FamilyData.from_family(fam2)


@pytest.fixture(scope="session")
def data4(ctx):
    return FamilyData.from_family(enumerate_family(ctx, 4))


CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion; the test outcome decides the status."""
    name = request.node.name.removeprefix("test_")
    notes: list[str] = []
    yield notes
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    CRITERIA[name] = (ok, "; ".join(notes))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA):
        ok, note = CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {note}")
