"""Shared helpers: pseudorandom admissible tuples for property tests."""
from math import gcd

from brickforge.master import MasterTuple

# one line per acceptance criterion, echoed after the test summary so the
# verdicts survive pytest's output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_pair(rng, lo=2, hi=1000):
    while True:
        a = rng.randrange(lo, hi)
        b = rng.randrange(1, a)
        if (a - b) % 2 == 1 and gcd(a, b) == 1:
            return a, b


def random_admissible(rng, lo=2, hi=1000) -> MasterTuple:
    a, b = random_pair(rng, lo, hi)
    m, n = random_pair(rng, lo, hi)
    return MasterTuple(a, b, m, n)
