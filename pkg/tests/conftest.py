import pytest

from mwx.params import ModeSpec, derive_constitutive


@pytest.fixture
def spec():
    """m = q = hbar = 1, nu = 1, omega = 4, so n = 0.5."""
    return ModeSpec(mass=1.0, drive_frequency=1.0, particle_frequency=4.0, hbar=1.0, charge=1.0)


@pytest.fixture
def const(spec):
    return derive_constitutive(spec)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
