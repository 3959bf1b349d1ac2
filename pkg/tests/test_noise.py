import pytest

from core.circuit import Circuit
from core.noise import NoiseModel, PrepNoiseProxy, annotate


def _names(circuit):
    return [inst.name for inst in circuit.instructions]


def _layer_circuit():
    circuit = Circuit(3)
    circuit.reset([0, 1], 'Z')
    circuit.tick()
    circuit.gate('H', 0)
    circuit.tick()
    circuit.gate('CX', 0, 1)
    circuit.tick()
    circuit.measure(1, 'Z')
    return circuit


def test_zero_noise_leaves_circuit_unchanged():
    circuit = _layer_circuit()
    assert annotate(circuit, NoiseModel(0.0)) == circuit


def test_channel_placement():
    noisy = annotate(_layer_circuit(), NoiseModel(1e-3))
    names = _names(noisy)
    assert names[names.index('R') + 1] == 'X_ERROR'
    assert names[names.index('H') + 1] == 'DEPOLARIZE1'
    cx = names.index('CX')
    assert names[cx + 1] == 'DEPOLARIZE2'
    assert noisy.instructions[cx + 1].args == (1e-3,)
    measurement = next(inst for inst in noisy.instructions if inst.name == 'M')
    assert measurement.args == (1e-3,)


def test_single_qubit_rates_are_a_tenth():
    model = NoiseModel(2e-3)
    assert model.single_qubit == pytest.approx(2e-4)
    assert model.reset == pytest.approx(2e-4)
    assert model.idle == pytest.approx(2e-4)
    assert model.two_qubit == model.measurement == 2e-3


def test_idle_noise_skips_touched_and_parked_qubits():
    circuit = Circuit(3)
    circuit.reset([0, 1], 'Z')
    circuit.tick()
    circuit.gate('H', 0)
    circuit.tick()
    circuit.reset(2, 'Z')
    circuit.gate('CX', 0, 1)
    circuit.tick()
    circuit.measure(1)
    circuit.measure(2)
    noisy = annotate(circuit, NoiseModel(1e-3))
    idles = [inst for inst in noisy.instructions if inst.name == 'DEPOLARIZE1' and 0 not in inst.targets]
    # Qubit 1 idles during the H layer; qubit 2 waits for its reset and never idles
    assert [inst.targets for inst in idles] == [(1,)]


def test_noiseless_instructions_stay_clean():
    circuit = Circuit(2)
    with circuit.noiseless_region():
        circuit.gate('CX', 0, 1)
        circuit.measure(0)
    noisy = annotate(circuit, NoiseModel(1e-2))
    assert 'DEPOLARIZE2' not in _names(noisy)
    assert noisy.instructions[-1].args == ()


def test_proxy_markers():
    circuit = Circuit(2)
    circuit.proxy([0, 1])
    circuit.measure(0, tags=('proxy',))
    noisy = annotate(circuit, NoiseModel(1e-3), PrepNoiseProxy(5e-3, 2e-3))
    assert noisy.instructions[0].name == 'DEPOLARIZE1'
    assert noisy.instructions[0].args == (5e-3,)
    assert noisy.instructions[-1].args == (2e-3,)
    assert 'PROXY' not in _names(annotate(circuit, NoiseModel(1e-3)))


def test_probability_range():
    with pytest.raises(ValueError):
        NoiseModel(1.5)
    with pytest.raises(ValueError):
        PrepNoiseProxy(-0.1)
