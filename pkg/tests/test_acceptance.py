"""Acceptance criteria 1-9.  Each criterion prints one PASS/FAIL line; the
lines are also repeated in the terminal summary."""

import pytest

from cubicsieve import acceptance as acc
from cubicsieve.sieve_numerics import TAU_DEFAULT, constants_report

RESULTS = {}


def _record(result):
    RESULTS[result.number] = result
    print(result.line())
    return result


@pytest.fixture(scope="module")
def constants():
    return _record(acc.check_constants())


@pytest.mark.parametrize("name", ["c3", "c5", "c6", "c7_pos", "c7_neg", "c8", "runtime"])
def test_criterion_1_constants(constants, name):
    assert constants.checks[name], f"{name}: {constants.detail}"


def test_criterion_1_c5_discrepancy_printed(constants):
    assert any("c5[gamma_s]" in n for n in constants.detail["notes"])
    assert any("c5[zero]" in n for n in constants.detail["notes"])


def test_criterion_2_assembly():
    r = _record(acc.check_assembly())
    assert r.passed, r.checks


def test_criterion_3_buchstab():
    r = _record(acc.check_buchstab())
    assert r.passed, r.detail


def test_criterion_4_heath_brown():
    r = _record(acc.check_hb())
    assert r.passed, r.detail


def test_criterion_5_algebra():
    r = _record(acc.check_algebra(100_000))
    assert r.passed, r.detail


def test_criterion_6_ideal_counts():
    r = _record(acc.check_ideal_counts(2000))
    assert r.passed, r.detail


def test_criterion_7_census():
    r = _record(acc.check_census())
    assert r.passed, r.detail


def test_criterion_8_typeI():
    r = _record(acc.check_typeI(200))
    assert r.passed, r.detail


def test_criterion_9_quadrature():
    r = _record(acc.check_quadrature())
    assert r.passed, r.detail
