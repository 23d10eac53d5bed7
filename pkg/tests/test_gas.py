# tests/test_gas.py
"""Gas model: calibration tables, consistency checks, estimates, rendering."""

from __future__ import annotations

import json

import pytest

from compiler.gas import check_calibration, contract_baseline, estimate, load_calibration, render_gas_report
from models.errors import GasModelError
from models.plugins import PluginSet

from conftest import ROOT


@pytest.fixture(scope="module")
def calibration():
    return load_calibration()


@pytest.fixture(scope="module")
def baseline(calibration, auction):
    return contract_baseline([t.name for t in auction.transitions], calibration)


class TestLoad:
    def test_shipped_file(self, calibration):
        assert calibration.baseline["bid"] == 58_249
        assert calibration.overhead_for("locking") == 10_672
        assert calibration.overhead_for("none") == 0
        assert calibration.deployment_for("none") == 504_672

    def test_explicit_path(self):
        assert load_calibration(ROOT / "calibration.json").spread_limits == {"locking": 20}

    def test_environment_override(self, monkeypatch, tmp_path):
        path = tmp_path / "cal.json"
        path.write_text(json.dumps({
            "perTransitionOverhead": {"locking": 1},
            "deploymentBase": 10,
            "deploymentByPlugins": {"locking": 11},
        }), encoding="utf-8")
        monkeypatch.setenv("FSMSOLC_CALIBRATION", str(path))
        assert load_calibration().overhead_for("locking") == 1

    @pytest.mark.parametrize("content", [None, "{not json", '{"deploymentBase": 1}'])
    def test_bad_file(self, tmp_path, content):
        path = tmp_path / "cal.json"
        if content is not None:
            path.write_text(content, encoding="utf-8")
        with pytest.raises(GasModelError) as info:
            load_calibration(path)
        assert info.value.code == "E_CALIBRATION_FILE"


class TestCalibrationCheck:
    def test_shipped_tables_pass(self, calibration):
        report = check_calibration(calibration)
        assert report.passed
        assert report.failures == []

    def test_locking_spread_is_asserted(self, calibration):
        spreads = {c.subject: c for c in check_calibration(calibration).checks if c.kind == "spread"}
        assert spreads["locking"].value == 18
        assert spreads["locking"].asserted
        assert not spreads["counter"].asserted
        assert not spreads["locking-counter"].asserted

    def test_additivity_residuals(self, calibration):
        residuals = {c.subject: c.value for c in check_calibration(calibration).checks if c.kind == "additivity"}
        assert residuals == {
            "bid": 15, "cancelABB": 0, "unbid": -3, "close": 0, "reveal": -9, "finish": -6, "withdraw": -3,
        }

    def test_percent_checks(self, calibration):
        percents = {c.subject: c for c in check_calibration(calibration).checks if c.kind == "percent"}
        assert percents["unbid"].value == 54.07
        assert percents["reveal"].value == 16.26
        assert all(c.passed for c in percents.values())

    def test_deployment_residual_is_informational(self, calibration):
        assert check_calibration(calibration).deployment_residual == 1_876

    def test_tight_tolerance_fails(self, calibration):
        report = check_calibration(calibration, tolerance=10)
        assert not report.passed
        assert [(c.kind, c.subject) for c in report.failures] == [("additivity", "bid")]

    def test_negative_tolerance(self, calibration):
        with pytest.raises(ValueError):
            check_calibration(calibration, tolerance=-1)


class TestEstimate:
    def test_baseline_leaves_out_unmeasured_transitions(self, baseline):
        assert len(baseline) == 7
        assert "cancelRB" not in baseline

    def test_locking(self, baseline, calibration):
        est = estimate(baseline, PluginSet(locking=True), calibration)
        assert est.plugins == "locking"
        assert est.per_transition["unbid"] == 30_407
        assert est.deployment == 577_514
        assert round(est.overhead_percent["unbid"]) == 54

    def test_locking_and_counter(self, baseline, calibration):
        est = estimate(baseline, PluginSet(locking=True, transition_counter=True), calibration)
        assert est.per_transition["reveal"] == 82_048
        assert est.deployment == 637_518

    def test_no_plugins_is_the_baseline(self, baseline, calibration):
        est = estimate(baseline, PluginSet(), calibration)
        assert est.per_transition == baseline
        assert set(est.overhead_percent.values()) == {0.0}

    @pytest.mark.parametrize("plugins", [
        PluginSet(timed_transitions=True),
        PluginSet(locking=True, access_control=True),
    ])
    def test_uncalibrated(self, baseline, calibration, plugins):
        with pytest.raises(GasModelError) as info:
            estimate(baseline, plugins, calibration)
        assert info.value.code == "E_UNCALIBRATED"


class TestRender:
    def test_text(self, baseline, calibration):
        est = estimate(baseline, PluginSet(locking=True), calibration)
        text = render_gas_report(est, baseline, "text", check_calibration(calibration))
        assert text.startswith("plugins: locking\ndeployment: 577514\n")
        assert "30407" in text
        assert "calibration check (tolerance 25): pass" in text
        assert "deployment additivity residual (informational): 1876" in text

    def test_json(self, baseline, calibration):
        est = estimate(baseline, PluginSet(locking=True), calibration)
        payload = json.loads(render_gas_report(est, baseline, "json", check_calibration(calibration)))
        assert payload["schemaVersion"] == 1
        assert payload["perTransition"]["unbid"] == 30_407
        assert payload["calibration"]["passed"] is True
        assert payload["calibration"]["deploymentResidual"] == 1_876
