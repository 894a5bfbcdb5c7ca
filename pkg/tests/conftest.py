import pytest

# criterion number -> (passed, message); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {msg}")


@pytest.fixture
def record_criterion():
    def record(n: int, ok: bool, msg: str) -> bool:
        ACCEPTANCE[n] = (bool(ok), msg)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {msg}")
        return ok

    return record
