from fractions import Fraction
import math

import pytest

ACCEPTANCE_LINES: list[str] = []


def brute_order(g, n: int) -> int:
    """Order of g = a/b mod n by repeated multiplication."""
    g = Fraction(g)
    if n == 1:
        return 1
    r = g.numerator * pow(g.denominator, -1, n) % n
    k, t = 1, r
    while t != 1:
        t = t * r % n
        k += 1
    return k


def brute_lambda(n: int) -> int:
    units = [u for u in range(1, n + 1) if math.gcd(u, n) == 1]
    k = 1
    while any(pow(u, k, n) != 1 % n for u in units):
        k += 1
    return k


@pytest.fixture
def record():
    def _record(label, passed: bool, detail: str) -> None:
        line = f"criterion {str(label):<4} {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
