"""The acceptance gate: every numbered criterion runs at its stated
tolerance and prints one pass/fail line."""

import pytest

from zetafio.acceptance import ALL_CRITERIA


@pytest.mark.parametrize("criterion", ALL_CRITERIA,
                         ids=[c.__name__ for c in ALL_CRITERIA])
def test_criterion(criterion):
    if "seed" in criterion.__code__.co_varnames:
        result = criterion(seed=1234)
    else:
        result = criterion()
    print(result.line())
    assert result.passed, result.line()
