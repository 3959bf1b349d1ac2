"""
###############################################################################
# Noise - Circuit-level depolarizing noise and the prep-noise proxy
###############################################################################
# Rules applied by annotate():
#     two-qubit gate      DEPOLARIZE2(p) on its pairs
#     single-qubit gate   DEPOLARIZE1(p/10)
#     reset               X_ERROR / Z_ERROR(p/10) against the reset basis
#     measurement         result flipped with probability p
#     idle in a tick      DEPOLARIZE1(p/10) on every untouched qubit
#     PROXY marker        DEPOLARIZE1(p′) when a PrepNoiseProxy is given
# Instructions tagged noiseless get no noise, and a tick whose layer holds
# only noiseless instructions adds no idle noise.
###############################################################################
"""

import logging

from .circuit import MEASUREMENTS, NOISE_CHANNELS, RESETS, SINGLE_QUBIT_GATES, TWO_QUBIT_GATES, Circuit, \
    Instruction

logger = logging.getLogger(__name__)


def _probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


class NoiseModel:
    ###############################################################################
    # NoiseModel - Uniform circuit-level depolarizing noise of strength p
    ###############################################################################

    def __init__(self, p, single_factor=0.1, idle_factor=0.1):
        """
        Initialize NoiseModel

        Args:
            p: Two-qubit depolarizing and measurement flip probability
            single_factor: Single-qubit gate and reset noise as a fraction of p
            idle_factor: Idle noise per tick as a fraction of p
        """
        self.p = _probability('p', p)
        self.single_factor = single_factor
        self.idle_factor = idle_factor

    @property
    def two_qubit(self):
        return self.p

    @property
    def single_qubit(self):
        return self.p * self.single_factor

    @property
    def reset(self):
        return self.p * self.single_factor

    @property
    def idle(self):
        return self.p * self.idle_factor

    @property
    def measurement(self):
        return self.p

    def to_dict(self):
        return {'p': self.p, 'single_factor': self.single_factor, 'idle_factor': self.idle_factor}

    def __repr__(self):
        return f"NoiseModel(p={self.p})"


class PrepNoiseProxy:
    ###############################################################################
    # PrepNoiseProxy - Stand-in for the noise of a fresh ancilla code block
    ###############################################################################

    def __init__(self, p_prime=0.0, meas_flip=0.0):
        """
        Initialize PrepNoiseProxy

        Args:
            p_prime: Depolarizing strength on every qubit of a fresh ancilla block
            meas_flip: Flip probability of each concatenated-generator syndrome
        """
        self.p_prime = _probability('p_prime', p_prime)
        self.meas_flip = _probability('meas_flip', meas_flip)

    @classmethod
    def for_model(cls, model, p_prime):
        """Proxy whose syndrome flips follow the model's measurement error"""
        return cls(p_prime, model.measurement)

    def to_dict(self):
        return {'p_prime': self.p_prime, 'meas_flip': self.meas_flip}

    def __repr__(self):
        return f"PrepNoiseProxy(p_prime={self.p_prime}, meas_flip={self.meas_flip})"


def _awaiting_reset(circuit):
    """For each TICK position, the qubits whose next operation is a reset"""
    upcoming = {}
    snapshots = {}
    for position in range(len(circuit.instructions) - 1, -1, -1):
        inst = circuit.instructions[position]
        if inst.name == 'TICK':
            snapshots[position] = {q for q, kind in upcoming.items() if kind == 'reset'}
        elif inst.name in RESETS:
            for q in inst.targets:
                upcoming[q] = 'reset'
        elif inst.is_gate() or inst.name in MEASUREMENTS:
            for q in inst.targets:
                upcoming[q] = 'use'
    return snapshots


def annotate(circuit, model, proxy=None):
    """
    Insert noise channels into a circuit

    Args:
        circuit: Noiseless Circuit from the protocol builders
        model: NoiseModel
        proxy: Optional PrepNoiseProxy for PROXY markers and 'proxy' measurements

    Returns:
        New Circuit; with p = 0 and no proxy the instructions are unchanged

    Example:
        noisy = annotate(build_state_prep(csd, layout), NoiseModel(1e-3))
    """
    out = Circuit(circuit.n_qubits)
    parked = _awaiting_reset(circuit)
    touched = set()
    noisy_layer = False
    for position, inst in enumerate(circuit.instructions):
        name = inst.name
        if name == 'TICK':
            if noisy_layer and model.idle > 0:
                idle = [q for q in range(circuit.n_qubits) if q not in touched and q not in parked[position]]
                if idle:
                    out.channel('DEPOLARIZE1', idle, model.idle)
            out.append(inst)
            touched, noisy_layer = set(), False
            continue
        if name == 'PROXY':
            if proxy is not None and proxy.p_prime > 0:
                out.channel('DEPOLARIZE1', inst.targets, proxy.p_prime)
            continue
        if name in NOISE_CHANNELS or name in ('DETECTOR', 'OBSERVABLE', 'FEEDBACK'):
            out.append(inst)
            continue
        touched.update(inst.targets)
        if inst.noiseless:
            out.append(inst)
            continue
        noisy_layer = True
        if name in MEASUREMENTS:
            if 'proxy' in inst.tags:
                flip = proxy.meas_flip if proxy is not None else model.measurement
            else:
                flip = model.measurement
            args = (flip,) if flip > 0 else ()
            out.append(Instruction(name, inst.targets, args, inst.tags))
        elif name in RESETS:
            out.append(inst)
            if model.reset > 0:
                out.channel('X_ERROR' if name == 'R' else 'Z_ERROR', inst.targets, model.reset)
        elif name in TWO_QUBIT_GATES:
            out.append(inst)
            if model.two_qubit > 0:
                out.channel('DEPOLARIZE2', inst.targets, model.two_qubit)
        elif name in SINGLE_QUBIT_GATES:
            out.append(inst)
            if model.single_qubit > 0:
                out.channel('DEPOLARIZE1', inst.targets, model.single_qubit)
        else:
            out.append(inst)
    logger.debug(f"Annotated {len(circuit)} instructions with {model}: {len(out)} after noise")
    return out
