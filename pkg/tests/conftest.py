import re

import pytest

_ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}


@pytest.fixture
def record_criterion():
    """Store a pass/fail line for the acceptance summary and echo it."""

    def record(criterion: str, ok: bool, detail: str) -> None:
        _ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
        print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} | {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE, key=lambda c: (int(re.match(r"\d+", c).group()), c)):
        checks = _ACCEPTANCE[criterion]
        ok = all(flag for flag, _ in checks)
        details = "; ".join(d for _, d in checks)
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} | {details}")
