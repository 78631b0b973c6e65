"""One pass/fail line per acceptance criterion, repeated in the terminal
summary of the test run."""

import pytest
from conftest import ACCEPTANCE_LINES

from foundry.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_acceptance_criterion(number):
    result = run_criterion(number)
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.detail
