import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

from rhp.forest import ForestTuple  # noqa: E402


@pytest.fixture
def worked_states() -> list[ForestTuple]:
    data = json.loads((FIXTURES / "worked_example_states.json").read_text())
    return [ForestTuple.from_dict(s) for s in data["states"]]


@pytest.fixture
def worked_initial(worked_states) -> ForestTuple:
    return worked_states[0]


@pytest.fixture
def worked_final(worked_states) -> ForestTuple:
    return worked_states[-1]


# -- acceptance summary -----------------------------------------------------------

_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    marker = "test_acceptance.py::test_criterion_"
    if report.when == "call" and marker in report.nodeid:
        key = report.nodeid.split(marker, 1)[1]
        _criteria[key] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda s: int(s.split("_", 1)[0])):
        num, _, name = key.partition("_")
        terminalreporter.write_line(f"criterion {num} ({name.replace('_', ' ')}): {_criteria[key]}")
