import pytest

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class Criterion:
    """Collects one verdict per acceptance criterion for the run summary."""

    def __init__(self, number: int):
        self.number = number
        self.notes: list[str] = []
        ACCEPTANCE[number] = (False, "did not finish")

    def note(self, text: str) -> None:
        self.notes.append(text)

    def done(self, ok: bool) -> bool:
        ACCEPTANCE[self.number] = (ok, "; ".join(self.notes))
        return ok


@pytest.fixture
def criterion(request):
    number = int(request.node.name.split("_")[1])
    return Criterion(number)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
