import numpy as np
import pytest

from core.circuit import Circuit, CliffordCircuit, propagate_gate
from core.exceptions import CircuitError, FormatError, NonCliffordError
from core.pauli import PauliOperator


@pytest.fixture
def small_circuit():
    circuit = Circuit(3)
    with circuit.noiseless_region():
        circuit.reset([0, 1], 'Z')
    circuit.reset(2, 'X')
    circuit.tick()
    circuit.gate('CX', 0, 1)
    circuit.channel('DEPOLARIZE2', [0, 1], 0.001)
    circuit.tick()
    a = circuit.measure(0, 'Z', flip=0.001, tags=('proxy',))
    b = circuit.measure(1, 'Z')
    c = circuit.measure(2, 'X')
    circuit.detector([a, b], postselect=True)
    circuit.detector([c])
    circuit.observable(0, [b])
    circuit.feedback([a], PauliOperator.from_string('XZ'), qubits=[1, 2])
    circuit.proxy([1, 2])
    return circuit


def test_text_round_trip(small_circuit):
    text = small_circuit.to_text()
    assert 'DETECTOR[postselect] r0 r1' in text
    assert 'M(0.001)[proxy] Z 0 -> r0' in text
    assert Circuit.from_text(text) == small_circuit


def test_queries(small_circuit):
    assert small_circuit.num_measurements == 3
    assert small_circuit.num_detectors == 2
    assert small_circuit.postselect_detectors() == [0]
    assert small_circuit.observables() == {0: (1,)}
    assert small_circuit.count('CX') == 1
    assert small_circuit.depth() == 2
    assert small_circuit.has_noise()
    assert not small_circuit.without_noise().has_noise()


def test_detectors_must_reference_existing_records():
    circuit = Circuit(1)
    with pytest.raises(CircuitError):
        circuit.detector([0])


def test_parse_errors_carry_line_numbers():
    with pytest.raises(FormatError, match='line 2'):
        Circuit.from_text("QUBITS 1\nM Z 0 -> r5\n")


def test_non_clifford_gate_rejected():
    with pytest.raises(NonCliffordError):
        Circuit(1).gate('T', 0)


def test_extend_shifts_records(small_circuit):
    combined = small_circuit.copy()
    offset = combined.extend(small_circuit)
    assert offset == 3
    assert combined.detectors()[2][0] == (3, 4)


def test_to_stim_counts(small_circuit):
    stim_circuit = small_circuit.to_stim()
    assert stim_circuit.num_detectors == 2
    assert stim_circuit.num_observables == 1


def test_clifford_word_round_trip():
    circuit = CliffordCircuit(4, [('H', 0), ('CX', 0, 1), ('S_DAG', 3), ('SWAP', 2, 3)])
    word = circuit.to_word(one_based=True)
    assert word == 'H1 CX(1,2) S_DAG4 SWAP(3,4)'
    assert CliffordCircuit.from_word(4, word, one_based=True) == circuit


def test_conjugation_through_cx():
    circuit = CliffordCircuit(2, [('CX', 0, 1)])
    assert circuit.conjugate(PauliOperator.from_string('XI')).letters() == 'XX'
    assert circuit.conjugate(PauliOperator.from_string('IZ')).letters() == 'ZZ'


def test_propagate_on_batches():
    x = np.array([[True, False], [False, False]])
    z = np.zeros((2, 2), dtype=bool)
    propagate_gate('CX', (0, 1), x, z)
    assert x[1].tolist() == [True, False]


def test_clifford_circuit_validation():
    with pytest.raises(CircuitError):
        CliffordCircuit(2, [('CX', 0, 0)])
    with pytest.raises(CircuitError):
        CliffordCircuit(2, [('H', 5)])
