"""One pass/fail line per acceptance criterion.

Run with ``pytest -s tests/test_acceptance.py`` or directly with
``python3 tests/test_acceptance.py``.
"""

import sys

import pytest

from quadstrata.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__.removeprefix("criterion_"))
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.failures[:5]


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
