import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def harmonic_tone(period, waves, seed=0, decay=0.0, harmonics=4):
    """Deterministic synthetic tone of ``floor(waves*period) + 1`` samples."""
    rng = np.random.default_rng(seed)
    n = int(np.floor(waves * period)) + 1
    t = np.arange(n) / period
    x = np.zeros(n)
    for h in range(1, harmonics + 1):
        x += rng.uniform(0.2, 1.0) / h * np.sin(2 * np.pi * h * t + rng.uniform(0, 2 * np.pi))
    return x * np.exp(-decay * t)


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    log = request.config.stash.setdefault(_KEY, {})

    def record(number, ok, detail):
        log[number] = (bool(ok), detail)
        return ok

    return record


_KEY = pytest.StashKey[dict]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_KEY, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 11):
        ok, detail = log.get(number, (False, "not run"))
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
