import pytest

from modules import sextic, verification
from modules.errors import ConstraintViolation, ConvergenceFailure


def test_oracle_calibration_suite_passes():
    suite = verification.oracle_suite()
    assert suite.passed, suite.failures
    assert len(suite.checks) == 4


def test_ladder_suite_passes():
    suite = verification.ladder_suite()
    assert suite.passed, suite.failures


def test_catalog_suite_passes(ledger_records):
    suite = verification.catalog_suite()
    assert suite.passed, suite.failures
    assert any(entry["topic"].startswith("catalog") for entry in ledger_records)


def test_failed_hard_check_fails_the_suite():
    suite = verification.SuiteResult("demo")
    suite.add("soft", False, 1.0, 0.5, hard=False)
    assert suite.passed
    suite.add("hard", False, 1.0, 0.5)
    assert not suite.passed
    assert suite.failures == ["hard"]
    assert suite.to_dict()["passed"] is False


def test_sextic_suite_rejects_configurations_outside_band():
    with pytest.raises(ConstraintViolation):
        verification.sextic_suite(sextic.SexticConfig(1.0, 1.5))


@pytest.mark.slow
def test_sextic_suite_on_moderate_configuration(moderate_config):
    suite = verification.sextic_suite(moderate_config, {"residual_points": 64001, "oracle_points": 4001})
    assert suite.passed, suite.failures
    assert suite.details["fictitious_state"]["node_count"] == 0
    names = [check.name for check in suite.checks]
    assert "fictitious-state report converged" in names
    assert "psi_0 tends to exp(-(B0+2G0)x^2/2) as x -> 0" in names


def test_failed_fictitious_report_fails_the_suite(moderate_config, monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceFailure("boundary sensitivity stayed high")

    monkeypatch.setattr(sextic, "fictitious_state_report", fail)
    suite = verification.SuiteResult("sextic")
    verification._fictitious_check(moderate_config, {}, suite)
    assert suite.failures == ["fictitious-state report converged"]
    assert suite.details["fictitious_state"]["error"] == "ConvergenceFailure"


def test_fictitious_report_is_recorded(moderate_config):
    suite = verification.SuiteResult("sextic")
    verification._fictitious_check(moderate_config, {"initial_points": 1001}, suite)
    assert suite.passed, suite.failures
    assert suite.details["fictitious_state"]["node_count"] == 0
