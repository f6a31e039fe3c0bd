from __future__ import annotations

import pytest

from starlight.constructions import (
    build_equitable_2chromatic_3star,
    build_unique_2chromatic_estar,
    lift_3star_chromatic,
)
from starlight.core import StarSystem

S3_6 = [(1, (3, 5, 6)), (2, (1, 3, 6)), (4, (1, 2, 3)), (5, (2, 3, 4)), (6, (3, 4, 5))]
S4_8 = [
    (1, (3, 5, 6, 8)),
    (2, (1, 3, 6, 8)),
    (4, (1, 2, 3, 8)),
    (5, (2, 3, 4, 7)),
    (6, (3, 4, 5, 7)),
    (7, (1, 2, 3, 4)),
    (8, (3, 5, 6, 7)),
]


@pytest.fixture
def s3_6() -> StarSystem:
    return StarSystem(3, 6, S3_6)


@pytest.fixture
def s4_8() -> StarSystem:
    return StarSystem(4, 8, S4_8)


@pytest.fixture(scope="session")
def lifted66():
    return lift_3star_chromatic(build_equitable_2chromatic_3star(6), seed=1)


@pytest.fixture(scope="session")
def unique138():
    return build_unique_2chromatic_estar(3)


# One line per acceptance criterion, filled by tests/test_acceptance.py and
# repeated at the end of the run so the gate reads at a glance.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
