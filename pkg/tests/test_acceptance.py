"""One test per acceptance criterion; each prints its PASS/FAIL line."""
import pytest

from levelone import suite


@pytest.mark.parametrize("entry", suite.CRITERIA, ids=[f"{c[0]}-{c[1]}" for c in suite.CRITERIA])
def test_criterion(entry, capsys):
    res = suite.run_criterion(entry, suite.SuiteConfig())
    with capsys.disabled():
        print("\n" + res.line())
    assert res.ok, res.line()
