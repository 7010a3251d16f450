import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from lowhom.words import Word

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=1000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def words(rank=3, max_len=8):
    letter = st.tuples(st.integers(0, rank - 1), st.sampled_from([1, -1]))
    return st.lists(letter, max_size=max_len).map(Word)


# acceptance criteria register their outcome here; printed in the terminal summary
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("LOWHOM_SLOW"):
        return
    skip = pytest.mark.skip(reason="long-running; set LOWHOM_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
