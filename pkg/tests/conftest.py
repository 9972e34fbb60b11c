from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6))


def moment_sequences(order: int) -> st.SearchStrategy[list[Fraction]]:
    """Random rational moment sequences with ``a_0 = 1``."""
    return st.lists(rationals, min_size=order, max_size=order).map(lambda tail: [Fraction(1)] + tail)


# acceptance criteria report: test_acceptance records one line per criterion
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter) -> None:  # pragma: no cover - reporting only
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
