"""Acceptance criteria.  Each test prints one PASS/FAIL line (visible with -s
or in the captured output of a failure) and asserts the criterion."""
import pytest

from tenfold import acceptance


@pytest.mark.parametrize("criterion", acceptance.CRITERIA,
                         ids=[fn.__name__ for fn in acceptance.CRITERIA])
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()


def test_run_all_reports_every_criterion():
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    assert [r.number for r in results] == list(range(1, 11))
