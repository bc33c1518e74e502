import pytest

# criterion number -> list of (part, passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(passed for _, passed, _ in parts)
        detail = "; ".join(f"{name}: {'ok' if passed else 'FAILED'} ({info})" for name, passed, info in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record():
    def _record(number: int, part: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE.setdefault(number, []).append((part, bool(passed), detail))

    return _record
