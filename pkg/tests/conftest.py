import pytest

from roughwave.params import ModelParams, validate_params


@pytest.fixture(scope="session")
def white_03():
    return validate_params(ModelParams(2.0, 0.3))


@pytest.fixture(scope="session")
def white_045():
    return validate_params(ModelParams(2.0, 0.45))


_ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict_line():
    """Record one pass/fail line per acceptance criterion; echoed in the terminal summary."""
    def emit(label: str, ok: bool, detail: str) -> bool:
        line = f"{label}: {'PASS' if ok else 'FAIL'} | {detail}"
        print(line)
        _ACCEPTANCE.append(line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
