import numpy as np
import pytest

from core.circuit import Circuit
from core.exceptions import FormatError, NondeterministicDetectorError
from core.noise import NoiseModel, annotate
from core.pauli import PauliOperator
from core.protocols import build_memory_circuit
from core.simulation import (DetectorErrorModel, check_determinism, elementary_faults, extract_dem,
                             merge_probability, sample, sample_circuit, simulate)


def _bell_circuit():
    circuit = Circuit(2)
    circuit.reset([0, 1])
    circuit.gate('H', 0)
    circuit.gate('CX', 0, 1)
    circuit.tick()
    return circuit


def _repetition_circuit(p):
    circuit = Circuit(3)
    circuit.reset([0, 1, 2])
    circuit.channel('X_ERROR', [0], p)
    circuit.tick()
    records = [circuit.measure(q) for q in range(3)]
    circuit.detector([records[0], records[1]])
    circuit.detector([records[1], records[2]])
    circuit.observable(0, [records[0]])
    return circuit


def test_simulate_bell_state():
    _, tableau = simulate(_bell_circuit())
    assert tableau.stabilizes(PauliOperator.from_string('XX'))
    assert tableau.stabilizes(PauliOperator.from_string('ZZ'))
    assert tableau.expectation(PauliOperator.from_string('ZI')) == 0
    assert tableau.stabilizes(PauliOperator.from_string('-YY'))


def test_simulate_with_injected_fault():
    circuit = Circuit(1)
    circuit.reset(0)
    circuit.measure(0)
    records, _ = simulate(circuit, faults=[(0, PauliOperator.from_string('X'))])
    assert records.tolist() == [True]


def test_simulate_feedback():
    circuit = Circuit(2)
    circuit.reset([0, 1])
    circuit.gate('X', 0)
    r = circuit.measure(0)
    circuit.feedback([r], PauliOperator.from_string('IX'))
    circuit.measure(1)
    records, _ = simulate(circuit)
    assert records.tolist() == [True, True]


def test_determinism_check():
    assert check_determinism(_repetition_circuit(0.1).without_noise())
    circuit = Circuit(1)
    circuit.reset(0, 'X')
    r = circuit.measure(0)
    circuit.detector([r])
    with pytest.raises(NondeterministicDetectorError):
        check_determinism(circuit)


def test_elementary_fault_split():
    circuit = Circuit(2)
    circuit.gate('CX', 0, 1)
    circuit.channel('DEPOLARIZE2', [0, 1], 0.015)
    circuit.channel('DEPOLARIZE1', [0], 0.03)
    faults = elementary_faults(circuit)
    assert len(faults) == 18
    assert faults[0].probability == pytest.approx(0.001)
    assert faults[-1].probability == pytest.approx(0.01)


def test_extract_dem_of_repetition_circuit():
    dem = extract_dem(_repetition_circuit(0.1))
    assert dem.mechanisms == [(0.1, (0,), (0,))]
    assert (dem.num_detectors, dem.num_observables) == (2, 1)


def test_merge_probability():
    assert merge_probability(0.1, 0.2) == pytest.approx(0.26)
    assert merge_probability(0.5, 0.3) == pytest.approx(0.5)


def test_dem_text_round_trip():
    dem = DetectorErrorModel([(0.01, (0, 2), ()), (0.2, (1,), (0,))], 3, 1, postselect=(2,))
    parsed = DetectorErrorModel.from_text(dem.to_text())
    assert parsed.mechanisms == dem.mechanisms
    assert parsed.postselect == (2,)
    assert (parsed.num_detectors, parsed.num_observables) == (3, 1)


def test_dem_rejects_bad_lines_and_probabilities():
    with pytest.raises(FormatError):
        DetectorErrorModel.from_text("error(0.1) Q3\n")
    with pytest.raises(ValueError):
        DetectorErrorModel([(0.7, (0,), ())], 1, 0)


def test_sample_marginal_at_one_half():
    dem = DetectorErrorModel([(0.5, (0,), (0,))], 1, 1)
    detectors, observables = sample(dem, 20_000, seed=3, batch_size=4096)
    assert detectors.shape == (20_000, 1)
    assert abs(detectors.mean() - 0.5) < 0.02
    assert np.array_equal(detectors, observables)


def test_sample_is_reproducible():
    dem = DetectorErrorModel([(0.1, (0,), ()), (0.3, (0, 1), (0,))], 2, 1)
    first = sample(dem, 1000, seed=9)
    second = sample(dem, 1000, seed=9)
    assert all(np.array_equal(a, b) for a, b in zip(first, second))


def test_sample_without_mechanisms():
    detectors, observables = sample(DetectorErrorModel([], 4, 2), 100)
    assert not detectors.any()
    assert observables.shape == (100, 2)


def test_sample_rejects_zero_shots():
    with pytest.raises(ValueError):
        sample(DetectorErrorModel([], 1, 0), 0)


def test_circuit_sampling_matches_rate():
    detectors, observables = sample_circuit(_repetition_circuit(0.2), 20_000, seed=5)
    assert abs(detectors[:, 0].mean() - 0.2) < 0.02
    assert not detectors[:, 1].any()
    assert np.array_equal(detectors[:, 0], observables[:, 0])


@pytest.mark.slow
def test_dem_marginals_match_circuit_sampling(c422):
    noisy = annotate(build_memory_circuit(c422.csd, c422.layout, rounds=2), NoiseModel(2e-3))
    shots = 100_000
    from_dem = sample(extract_dem(noisy), shots, seed=21)[0].mean(axis=0)
    direct = sample_circuit(noisy, shots, seed=22)[0].mean(axis=0)
    assert from_dem.shape == direct.shape
    pooled = (from_dem + direct) / 2
    sigma = np.sqrt(np.maximum(2 * pooled * (1 - pooled) / shots, 1.0 / shots ** 2))
    z = np.abs(from_dem - direct) / sigma
    assert (z < 3).mean() >= 0.95
    assert z.max() < 5, int(np.argmax(z))
