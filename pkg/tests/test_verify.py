import pytest

from semistab.verify import SUITES, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_pass_on_small_runs(name):
    rep = run_suite(name, 10, 1)
    assert rep.passed, rep.falsifications
    d = rep.to_dict()
    assert d["suite"] == name and d["trials"] == 10 and d["passed"]


def test_reports_are_reproducible():
    a = run_suite("lemma4_2", 15, 3).to_dict()
    b = run_suite("lemma4_2", 15, 3).to_dict()
    assert a == b


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope", 1, 0)
