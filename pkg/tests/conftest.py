import pytest

from ajchain.chain import ChainParams

BASELINE = (0.5, -1.0 / 3.0, 0.25)

# one or more admissible (alpha, beta, t) per region
REGION_SETS = {
    "A1": [(0.5, -1.0 / 3.0, 0.25), (0.5, -1.0 / 3.0, 2.1), (0.02, -0.01, 0.005)],
    "A2": [(0.25, -0.5, 0.375), (0.05, -0.9, 0.875)],
    "B1": [(0.8, -0.5, 0.1), (0.9, -0.2, 0.05)],
    "B2": [(0.6, -0.8, 0.3)],
    "C1": [(-0.25, -0.5, 0.125)],
    "C2": [(-0.5, -1.0 / 3.0, 0.6)],
    "D1": [(-0.3, -0.9, 0.25)],
    "D2": [(-0.9, -0.3, -0.05)],
}

ALL_SETS = [s for sets in REGION_SETS.values() for s in sets]
POSITIVE_ALPHA_SETS = [s for s in ALL_SETS if s[0] > 0]
ONE_PER_REGION = [sets[0] for sets in REGION_SETS.values()]


@pytest.fixture
def baseline():
    return ChainParams.admissible(*BASELINE)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
