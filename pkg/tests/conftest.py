import json
import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from hocolim import io  # noqa: E402

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much]
)
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FANS = ["cp1", "cp2", "cp3", "hirzebruch1", "p1xp1"]


def fan_data(name: str) -> dict:
    return json.loads((io.data_dir() / f"{name}.json").read_text())


@pytest.fixture(scope="session")
def diagrams():
    return {n: io.load_diagram(f"{n}.json")[1] for n in FANS + ["tripod"]}


@pytest.fixture(params=FANS)
def fan_name(request):
    return request.param


# -- acceptance report -------------------------------------------------------
# test_acceptance.py records one verdict per criterion; the summary prints them.

def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS as ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda s: (int(s.rstrip("abcdefgh")), s)):
        ok, title = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:<14} {'PASS' if ok else 'FAIL'}  {title}")
