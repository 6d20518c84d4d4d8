import pytest
from hypothesis import settings

from ddpoly.monoid import Signature
from ddpoly.opalg import DerivationAction, GroundField, OreAlgebra, TranslationAction

settings.register_profile("ddpoly", deadline=None, max_examples=60)
settings.load_profile("ddpoly")


@pytest.fixture(scope="session")
def qx():
    """Q(x) with d1 = d/dx and a1: x -> x+1."""
    sig = Signature(1, 1)
    return OreAlgebra(GroundField(sig, ["x"], [DerivationAction("x")], [TranslationAction("shift", "x")]))


@pytest.fixture(scope="session")
def const11():
    return OreAlgebra.constants(1, 1)


@pytest.fixture(scope="session")
def const10():
    return OreAlgebra.constants(1, 0)


# -- one line per acceptance criterion in the terminal summary -----------------

_criteria: dict = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.failed:
        num = int(name.split("_")[2])
        prev = _criteria.get(num)
        _criteria[num] = (name, "FAIL" if report.failed or prev and prev[1] == "FAIL" else "PASS",
                          report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        name, status, secs = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {status}  ({secs:.2f}s)  {name}")
