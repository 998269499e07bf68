import json
from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def oracles():
    return json.loads((FIXTURES / "oracles.json").read_text())


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def step_stream(seed: int = 0, n: int = 1000, jump: float = 8.0) -> np.ndarray:
    """``n`` draws of N(0, 1) followed by ``n`` draws of N(jump, 1)."""
    x = np.random.default_rng(seed).standard_normal(2 * n)
    x[n:] += jump
    return x


def two_segment(seed: int = 5, n: int = 10, shift: float = 5.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.concatenate((rng.normal(0, 1, n), rng.normal(shift, 1, n)))


# acceptance criterion -> list of (check name, passed, detail)
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def record_criterion(number: int, check: str, passed: bool, detail: str = "") -> bool:
    ACCEPTANCE.setdefault(number, []).append((check, bool(passed), detail))
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        status = "PASS" if all(ok for _, ok, _ in checks) else "FAIL"
        failed = [f"{name} ({detail})" if detail else name for name, ok, detail in checks if not ok]
        summary = "; ".join(failed) if failed else f"{len(checks)} checks"
        terminalreporter.write_line(f"{status} criterion {number}: {summary}")
