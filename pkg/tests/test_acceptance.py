"""Acceptance gate: every criterion at its stated tolerance, one PASS/FAIL line each."""

import pytest

from bdtrees.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("name", list(CRITERIA), ids=[f"{v[0]:02d}-{k}" for k, v in CRITERIA.items()])
def test_criterion(name, capsys):
    result = run_criterion(name)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
