import math

import pytest

from aicontrast.physics import AtomCloud, RamanBeam

OMEGA0 = 2 * math.pi * 25e3
SIGMA0 = 3e-3

SCENARIOS = {
    "normal": dict(w=20e-3, temperature=7e-6),
    "better": dict(w=30e-3, temperature=3e-6),
    "ideal": dict(w=300e-3, temperature=0.0),
}


def make(name, omega=OMEGA0):
    p = SCENARIOS[name]
    return RamanBeam(p["w"], omega), AtomCloud(SIGMA0, p["temperature"])


@pytest.fixture
def normal():
    return make("normal")


@pytest.fixture
def better():
    return make("better")


@pytest.fixture
def ideal():
    return make("ideal")


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
