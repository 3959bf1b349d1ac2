import numpy as np
import pytest

from core.pauli import PauliOperator
from core.protocols import PrepPolicy
from tools.faults import FaultAnalyzer, StabilizerCosets


def test_light_cosets():
    stabilizers = [PauliOperator.from_string(s) for s in ('XXXX', 'ZZZZ')]
    cosets = StabilizerCosets(stabilizers, 4)
    weight_three = PauliOperator.from_string('XXXI').symplectic().to_array()
    weight_two = PauliOperator.from_string('XXII').symplectic().to_array()
    assert cosets.is_light(weight_three)
    assert not cosets.is_light(weight_two)
    assert cosets.is_light(np.zeros(8, dtype=bool))


@pytest.mark.slow
@pytest.mark.parametrize('seed', ['c422', 'c513'])
@pytest.mark.parametrize('use_flagcilla', [True, False])
@pytest.mark.parametrize('basis', ['Z', 'X'])
def test_state_prep_is_fault_tolerant(request, seed, use_flagcilla, basis):
    construction = request.getfixturevalue(seed)
    report = FaultAnalyzer.for_state_prep(construction, PrepPolicy(basis, use_flagcilla=use_flagcilla)).analyze()
    assert report.total > 0
    assert report.ok, report.to_dict()['counterexamples'][:5]


@pytest.mark.slow
@pytest.mark.parametrize('seed', ['c422', 'c513'])
def test_y_measurement_is_fault_tolerant(request, seed):
    construction = request.getfixturevalue(seed)
    report = FaultAnalyzer.for_y_measurement(construction).analyze()
    assert report.total == report.detected + report.harmless + len(report.counterexamples)
    assert report.detected > 0
    assert report.ok, report.to_dict()['counterexamples'][:5]
