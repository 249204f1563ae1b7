import pytest

from shockfront import _settings

# acceptance criterion -> list of (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE.setdefault(criterion, []).append((bool(passed), detail))


@pytest.fixture(autouse=True)
def _reset_tolerance():
    yield
    _settings.set_root_tol(None)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[crit]
        verdict = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {crit}: {verdict}  {detail}")
