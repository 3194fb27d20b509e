import random

import pytest

from nomaut.laws import (
    commutativity,
    fbar_laws,
    lambda_laws,
    lattice_laws,
    monad_laws,
    psi_laws,
    rho_laws,
    run_selfcheck,
)
from nomaut.nominal import SuppSet


def test_selfcheck_passes_at_default_seed():
    report = run_selfcheck(0, 200)
    assert report.ok, str(report)
    assert all(c.cases > 0 for c in report.checks)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_selfcheck_other_seeds(seed):
    assert run_selfcheck(seed, 50).ok


def test_selfcheck_defect_is_caught():
    report = run_selfcheck(0, 200, defect=True)
    assert not report.ok
    assert any("lambda" in c.name for c in report.failures())


def test_zero_cases_pass_with_a_warning():
    with pytest.warns(UserWarning, match="vacuously"):
        report = run_selfcheck(0, 0)
    assert report.ok


def test_selfcheck_is_deterministic():
    assert run_selfcheck(5, 30).lines() == run_selfcheck(5, 30).lines()


@pytest.mark.parametrize("suite", [
    monad_laws, commutativity, lambda_laws, rho_laws, psi_laws, lattice_laws, fbar_laws,
])
def test_each_suite(suite):
    check = suite(random.Random(9), 100)
    assert check.passed, check.line()


def test_lambda_suite_rejects_a_lossy_law():
    def lossy(v):
        from nomaut.kleisli import lambda_F
        out = lambda_F(v)
        return SuppSet(list(out)[:1])
    assert not lambda_laws(random.Random(0), 200, lossy).passed
