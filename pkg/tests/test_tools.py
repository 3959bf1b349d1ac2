import json

import pandas as pd
import pytest

from core.noise import NoiseModel
from core.protocols import PrepPolicy
from tools.cli import main
from tools.experiments import ExperimentReport, ExperimentRunner
from tools.performance import LogicalErrorMetrics
from tools.reporting import ReportGenerator
from tools.reproduction import histogram_median, reproduce_tables
from tools.sweeps import SweepRunner


###############################################################################
# Metrics
###############################################################################

def test_prep_metrics_use_per_logical_exponent():
    metrics = LogicalErrorMetrics(10, 1000, 4, kind='prep')
    assert metrics.exponent == pytest.approx(0.25)
    assert metrics.epsilon() == pytest.approx(1 - 0.99 ** 0.25)


def test_memory_metrics_use_per_round_exponent():
    metrics = LogicalErrorMetrics(10, 1000, 2, rounds=3)
    assert metrics.epsilon() == pytest.approx(1 - 0.99 ** (1 / 6))
    assert metrics.p_logical_stddev() == pytest.approx((0.01 * 0.99 / 1000) ** 0.5)


def test_rule_of_three_without_failures():
    metrics = LogicalErrorMetrics(0, 1000, 4, kind='prep')
    assert metrics.epsilon() == 0.0
    assert metrics.p_logical_upper_bound() == pytest.approx(0.003)
    assert metrics.epsilon_upper_bound() == pytest.approx(1 - 0.997 ** 0.25)
    assert not metrics.is_resolved()


def test_metrics_validation():
    with pytest.raises(ValueError):
        LogicalErrorMetrics(5, 4, 1)
    with pytest.raises(ValueError):
        LogicalErrorMetrics(0, 10, 1, kind='gate')
    with pytest.raises(ValueError):
        LogicalErrorMetrics(0, 10, 0)


###############################################################################
# Experiments
###############################################################################

def test_noiseless_prep_experiment(c422, config):
    point = ExperimentRunner(config).prep_experiment(c422, PrepPolicy(), NoiseModel(0.0), 200, distance=4)
    assert point.code == '[[16,4,4]]'
    assert point.acceptance == 1.0
    assert point.epsilon == 0.0


def test_noisy_prep_experiment_rejects_some_shots(c422, config):
    point = ExperimentRunner(config).prep_experiment(c422, PrepPolicy(), NoiseModel(5e-3), 500, distance=4)
    assert 0.0 < point.acceptance < 1.0
    assert point.extras['allow_m'] == 0
    assert point.extras['m'] == 1
    assert point.metrics.shots == point.accepted


def test_noiseless_memory_experiment(c422, config):
    point = ExperimentRunner(config).memory_experiment(c422, 1, NoiseModel(0.0), shots=50)
    assert point.metrics.failures == 0
    assert point.metrics.discarded == 0
    assert point.extras['rounds'] == 1


def test_prep_sweep_over_allow_m(c422, config):
    report = SweepRunner(config).run_prep_sweep([c422], p_grid=[5e-3], shots=200, allow_m_values=[0, 1])
    assert len(report) == 2
    strict = report.point(report.codes[0], 5e-3, allow_m=0)
    loose = report.point(report.codes[0], 5e-3, allow_m=1)
    assert loose.accepted >= strict.accepted
    with pytest.raises(KeyError):
        report.point(report.codes[0], 1e-1)


###############################################################################
# Reporting
###############################################################################

def test_report_exports(tmp_path, c422, config):
    report = ExperimentReport('prep', config)
    report.add(ExperimentRunner(config).prep_experiment(c422, PrepPolicy(), NoiseModel(0.0), 20, distance=4))
    generator = ReportGenerator(report=report)
    generator.to_csv(tmp_path / 'prep.csv')
    frame = pd.read_csv(tmp_path / 'prep.csv')
    assert frame.loc[0, 'code'] == '[[16,4,4]]'
    data = generator.to_json(tmp_path / 'prep.json')
    assert data['kind'] == 'prep'
    assert data['config']['seed'] == 11
    with pytest.raises(ValueError):
        ReportGenerator()


def test_histogram_median():
    assert histogram_median({0: 1, 1: 1, 2: 5}) == 2
    assert histogram_median({0: 3, 4: 1}) == 0


def test_reproduction_without_groups(config):
    config.update(seed=7, distance_trials=1000)
    checks = reproduce_tables(config, seeds=['c422'], include_groups=False, include_histogram=False)
    assert list(checks.columns) == ['check', 'expected', 'actual', 'passed', 'runtime_s']
    assert checks['passed'].all(), checks[~checks['passed']]


###############################################################################
# Command line
###############################################################################

def test_cli_build(tmp_path):
    out = tmp_path / 'c422.json'
    assert main(['build', '--seed', 'c422', '--out', str(out)]) == 0
    data = json.loads(out.read_text())
    assert (data['n'], data['k']) == (16, 4)
    assert data['q_max'] == 8


def test_cli_unknown_seed():
    assert main(['build', '--seed', 'c999']) == 2
