"""Acceptance battery: one test per criterion, one PASS/FAIL line each.

The lines are printed in the pytest terminal summary; running this file
directly prints them too.
"""

import pytest

from cubespectra.acceptance import CRITERIA, run_criterion

SEED = 0
RESULTS = []


@pytest.mark.parametrize("number", [num for num, _, _ in CRITERIA],
                         ids=[f"criterion_{num}" for num, _, _ in CRITERIA])
def test_criterion(number):
    result = run_criterion(number, SEED)
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.line()


if __name__ == "__main__":
    for num, _, _ in CRITERIA:
        print(run_criterion(num, SEED).line(), flush=True)
