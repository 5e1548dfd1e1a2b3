from fractions import Fraction

import pytest

from bayes_contracts import Instance, gen_bi_approx_gap, gen_linear_gap


@pytest.fixture
def e1():
    """One type; a0 is free and yields outcome 0, a1 costs 1/2 and yields outcome 1."""
    return Instance(
        mu=[1],
        F=[[[1, 0], [0, 1]]],
        c=[[0, Fraction(1, 2)]],
        r=[0, 1],
    )


@pytest.fixture
def gap2():
    return gen_linear_gap(2)


@pytest.fixture
def biapprox1():
    return gen_bi_approx_gap(1)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(report, "user_properties", ()))
            if "criterion" in props and report.when == "call":
                lines.append((props["criterion"], outcome.upper(), props.get("summary", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for criterion, outcome, summary in sorted(lines, key=lambda x: int(x[0])):
            status = "PASS" if outcome == "PASSED" else "FAIL"
            terminalreporter.write_line(f"criterion {criterion}: {status}  {summary}")
