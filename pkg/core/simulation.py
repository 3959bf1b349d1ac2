"""
###############################################################################
# Simulation - Tableau oracle, Pauli-frame sampling and detector error models
###############################################################################
# simulate():        exact stabilizer evolution through stim's TableauSimulator
# FrameSimulator:    bit-packed Pauli frames, one bit per shot, used both for
#                    Monte Carlo sampling and for propagating single faults
# extract_dem():     every elementary fault propagated once; identical symptom
#                    sets merged with p1(1-p2) + p2(1-p1)
###############################################################################
"""

import logging
import re
import time

import numpy as np

from .circuit import MEASUREMENTS, NOISE_CHANNELS, RESETS, SINGLE_QUBIT_GATES, TWO_QUBIT_GATES, propagate_gate
from .exceptions import FormatError, NonCliffordError, NondeterministicDetectorError
from .f2 import WORD, n_words, pack_bits, unpack_bits
from .pauli import PauliOperator

logger = logging.getLogger(__name__)

_FULL = np.iinfo(np.uint64).max
_LETTER_BITS = {'X': (True, False), 'Y': (True, True), 'Z': (False, True)}
_TWO_QUBIT_PAULIS = [(a, b) for a in 'IXYZ' for b in 'IXYZ' if (a, b) != ('I', 'I')]


def _stim_string(pauli, n):
    import stim

    if pauli.phase % 2:
        raise ValueError(f"Pauli {pauli.to_string()} is not Hermitian")
    letters = pauli.letters() + 'I' * (n - pauli.n)
    return stim.PauliString(('-' if pauli.phase == 2 else '+') + letters)


###############################################################################
# Tableau oracle
###############################################################################

class Tableau:
    ###############################################################################
    # Tableau - Stabilizer state with signs, backed by a stim.Tableau
    ###############################################################################

    def __init__(self, stim_tableau):
        self._tableau = stim_tableau

    @property
    def n(self):
        return len(self._tableau)

    def stabilizers(self):
        return [PauliOperator.from_string(str(self._tableau.z_output(k))) for k in range(self.n)]

    def destabilizers(self):
        return [PauliOperator.from_string(str(self._tableau.x_output(k))) for k in range(self.n)]

    def expectation(self, pauli):
        """+1 or -1 when ±pauli stabilizes the state, 0 otherwise"""
        import stim

        sim = stim.TableauSimulator()
        sim.set_inverse_tableau(self._tableau.inverse())
        return int(sim.peek_observable_expectation(_stim_string(pauli, self.n)))

    def stabilizes(self, pauli, up_to_sign=False):
        value = self.expectation(pauli)
        return value != 0 if up_to_sign else value == 1

    def __repr__(self):
        return f"Tableau(n={self.n})"


def simulate(circuit, faults=None, seed=None):
    """
    Exact stabilizer simulation of a circuit

    Args:
        circuit: Circuit (noise channels are sampled)
        faults: Optional list of (position, PauliOperator) applied right after
                instruction `position`
        seed: Seed for random measurement outcomes and noise

    Returns:
        tuple: (bool array of measurement results, final Tableau)

    Raises:
        NonCliffordError: for an instruction outside the Clifford gate set
    """
    import stim

    n = circuit.n_qubits
    sim = stim.TableauSimulator(seed=seed) if seed is not None else stim.TableauSimulator()
    sim.set_num_qubits(n)
    pending = {}
    for position, pauli in faults or []:
        pending.setdefault(position, []).append(pauli)
    records = []
    for position, inst in enumerate(circuit.instructions):
        name = inst.name
        if name in ('TICK', 'DETECTOR', 'OBSERVABLE', 'PROXY'):
            pass
        elif name == 'FEEDBACK':
            if sum(records[r] for r in inst.args) % 2:
                for letter, q in zip(inst.letters, inst.targets):
                    getattr(sim, letter.lower())(q)
        elif name in MEASUREMENTS or name in RESETS or name in NOISE_CHANNELS or \
                name in SINGLE_QUBIT_GATES or name in TWO_QUBIT_GATES:
            op = stim.Circuit()
            op.append(name, list(inst.targets), list(inst.args))
            sim.do(op)
            if name in MEASUREMENTS:
                records.append(bool(sim.current_measurement_record()[-1]))
        else:
            raise NonCliffordError(f"Cannot simulate instruction '{name}'")
        for pauli in pending.get(position, ()):
            for q, letter in enumerate(pauli.letters()):
                if letter != 'I':
                    getattr(sim, letter.lower())(q)
    tableau = Tableau(sim.current_inverse_tableau().inverse())
    return np.array(records, dtype=bool), tableau


def detector_values(circuit, records):
    """Parity of each detector's records for one shot"""
    records = np.asarray(records, dtype=bool)
    return np.array([records[list(targets)].sum() % 2 == 1 for targets, _ in circuit.detectors()], dtype=bool)


def observable_values(circuit, records):
    records = np.asarray(records, dtype=bool)
    observables = circuit.observables()
    return np.array([records[list(observables[i])].sum() % 2 == 1 if i in observables else False
                     for i in range(circuit.num_observables)], dtype=bool)


###############################################################################
# Elementary faults
###############################################################################

class Fault:
    ###############################################################################
    # Fault - One elementary Pauli or measurement flip at a circuit position
    ###############################################################################

    __slots__ = ('position', 'probability', 'qubits', 'letters', 'record', 'channel')

    def __init__(self, position, probability, qubits=(), letters='', record=None, channel=''):
        self.position = position
        self.probability = probability
        self.qubits = tuple(qubits)
        self.letters = letters
        self.record = record
        self.channel = channel

    def describe(self):
        if self.record is not None:
            return f"flip r{self.record} @{self.position}"
        body = ' '.join(f"{letter}{q}" for letter, q in zip(self.letters, self.qubits))
        return f"{self.channel} {body} @{self.position}"

    def __repr__(self):
        return f"Fault({self.describe()}, p={self.probability:.3g})"


def elementary_faults(circuit):
    """
    Split every channel into independent elementary faults

    DEPOLARIZE1(p) gives three faults of p/3 per qubit, DEPOLARIZE2(p) fifteen
    of p/15 per pair, and a noisy measurement one flip of probability p.
    """
    faults = []
    record = 0
    for position, inst in enumerate(circuit.instructions):
        name = inst.name
        if name in MEASUREMENTS:
            if inst.args and inst.args[0] > 0:
                faults.append(Fault(position, inst.args[0], record=record, channel=name))
            record += len(inst.targets)
        elif name == 'DEPOLARIZE1':
            p = inst.args[0] / 3
            for q in inst.targets:
                faults.extend(Fault(position, p, (q,), letter, channel=name) for letter in 'XYZ')
        elif name == 'DEPOLARIZE2':
            p = inst.args[0] / 15
            for a, b in zip(inst.targets[::2], inst.targets[1::2]):
                for la, lb in _TWO_QUBIT_PAULIS:
                    qubits = [q for q, letter in ((a, la), (b, lb)) if letter != 'I']
                    letters = ''.join(letter for letter in (la, lb) if letter != 'I')
                    faults.append(Fault(position, p, qubits, letters, channel=name))
        elif name in ('X_ERROR', 'Y_ERROR', 'Z_ERROR'):
            for q in inst.targets:
                faults.append(Fault(position, inst.args[0], (q,), name[0], channel=name))
    return [f for f in faults if f.probability > 0]


###############################################################################
# Pauli-frame simulation
###############################################################################

class FrameResult:
    ###############################################################################
    # FrameResult - Packed measurement flips and final frames of one run
    ###############################################################################

    def __init__(self, records, x, z, shots):
        self.records = records
        self.x = x
        self.z = z
        self.shots = shots

    def record_bits(self):
        """(shots, measurements) bool array"""
        return unpack_bits(self.records, self.shots).T if len(self.records) else np.zeros((self.shots, 0), bool)

    def data_frames(self, qubits):
        """(shots, len(qubits)) bool arrays of the final X and Z frame bits"""
        qubits = list(qubits)
        return unpack_bits(self.x[qubits], self.shots).T, unpack_bits(self.z[qubits], self.shots).T


class FrameSimulator:
    ###############################################################################
    # FrameSimulator - Pauli frames for many shots at once (one bit per shot)
    # Frames record the deviation from a noiseless reference run; with
    # randomize=True resets and measurements apply random gauge Paulis, which
    # exposes any measurement whose value is not fixed.
    ###############################################################################

    def __init__(self, circuit):
        self.circuit = circuit
        self.n_qubits = circuit.n_qubits
        self._detectors = [list(targets) for targets, _ in circuit.detectors()]
        observables = circuit.observables()
        self._observables = [list(observables.get(i, ())) for i in range(circuit.num_observables)]

    def _bernoulli(self, rng, p, count, shots):
        return pack_bits(rng.random((count, shots)) < p)

    def _random_words(self, rng, count, words):
        return rng.integers(0, _FULL, size=(count, words), dtype=np.uint64, endpoint=True)

    def run(self, shots, rng=None, noise=True, randomize=True, faults=None):
        """
        Propagate frames through the circuit

        Args:
            shots: Number of shots (columns)
            rng: numpy Generator (required when noise or randomize is set)
            noise: Sample the circuit's noise channels
            randomize: Apply gauge randomization after resets and measurements
            faults: Optional list of Fault, fault f injected into shot f only

        Returns:
            FrameResult
        """
        if (noise or randomize) and rng is None:
            rng = np.random.default_rng()
        words = n_words(shots)
        n = self.n_qubits
        x = np.zeros((n, words), dtype=np.uint64)
        z = np.zeros((n, words), dtype=np.uint64)
        records = np.zeros((self.circuit.num_measurements, words), dtype=np.uint64)
        pauli_faults, flip_faults = self._index_faults(faults or [])
        record = 0
        for position, inst in enumerate(self.circuit.instructions):
            name = inst.name
            targets = inst.targets
            if inst.is_gate():
                propagate_gate(name, targets, x, z)
            elif name in RESETS:
                for q in targets:
                    keep, gauge = (x, z) if name == 'R' else (z, x)
                    keep[q] = 0
                    gauge[q] = self._random_words(rng, 1, words)[0] if randomize else 0
            elif name in MEASUREMENTS:
                for q in targets:
                    flips = (x[q] if name == 'M' else z[q]).copy()
                    if noise and inst.args and inst.args[0] > 0:
                        flips ^= self._bernoulli(rng, inst.args[0], 1, shots)[0]
                    if record in flip_faults:
                        flips ^= flip_faults[record]
                    records[record] = flips
                    if randomize:
                        gauge = z if name == 'M' else x
                        gauge[q] ^= self._random_words(rng, 1, words)[0]
                    record += 1
            elif name in NOISE_CHANNELS:
                if noise:
                    self._apply_channel(inst, x, z, rng, shots)
            elif name == 'FEEDBACK':
                condition = np.bitwise_xor.reduce(records[list(inst.args)], axis=0)
                for letter, q in zip(inst.letters, targets):
                    has_x, has_z = _LETTER_BITS[letter]
                    if has_x:
                        x[q] ^= condition
                    if has_z:
                        z[q] ^= condition
            elif name in ('TICK', 'DETECTOR', 'OBSERVABLE', 'PROXY'):
                pass
            else:
                raise NonCliffordError(f"Cannot propagate frames through '{name}'")
            if position in pauli_faults:
                for q, mask_x, mask_z in pauli_faults[position]:
                    x[q] ^= mask_x
                    z[q] ^= mask_z
        return FrameResult(records, x, z, shots)

    def _index_faults(self, faults):
        """Group faults into per-position frame masks and per-record flip masks"""
        words = n_words(len(faults))
        paulis = {}
        flips = {}
        for shot, fault in enumerate(faults):
            word, bit = divmod(shot, WORD)
            mask = np.uint64(1) << np.uint64(bit)
            if fault.record is not None:
                flips.setdefault(fault.record, np.zeros(words, dtype=np.uint64))[word] ^= mask
                continue
            entry = paulis.setdefault(fault.position, {})
            for q, letter in zip(fault.qubits, fault.letters):
                mx, mz = entry.setdefault(q, (np.zeros(words, dtype=np.uint64), np.zeros(words, dtype=np.uint64)))
                has_x, has_z = _LETTER_BITS[letter]
                if has_x:
                    mx[word] ^= mask
                if has_z:
                    mz[word] ^= mask
        return {pos: [(q, mx, mz) for q, (mx, mz) in entry.items()] for pos, entry in paulis.items()}, flips

    def _apply_channel(self, inst, x, z, rng, shots):
        name, p = inst.name, inst.args[0]
        if p <= 0:
            return
        if name == 'DEPOLARIZE1':
            qubits = list(inst.targets)
            occur = rng.random((len(qubits), shots)) < p
            which = rng.integers(1, 4, size=(len(qubits), shots))
            x[qubits] ^= pack_bits(occur & (which <= 2))
            z[qubits] ^= pack_bits(occur & (which >= 2))
        elif name == 'DEPOLARIZE2':
            first, second = list(inst.targets[::2]), list(inst.targets[1::2])
            occur = rng.random((len(first), shots)) < p
            which = rng.integers(1, 16, size=(len(first), shots))
            for qubits, code in ((first, which % 4), (second, which // 4)):
                x[qubits] ^= pack_bits(occur & ((code == 1) | (code == 2)))
                z[qubits] ^= pack_bits(occur & (code >= 2))
        else:
            qubits = list(inst.targets)
            occur = pack_bits(rng.random((len(qubits), shots)) < p)
            has_x, has_z = _LETTER_BITS[name[0]]
            if has_x:
                x[qubits] ^= occur
            if has_z:
                z[qubits] ^= occur

    def detector_flips(self, result):
        """(detectors, words) packed detector flips"""
        return self._parities(result.records, self._detectors)

    def observable_flips(self, result):
        return self._parities(result.records, self._observables)

    @staticmethod
    def _parities(records, groups):
        words = records.shape[1] if records.ndim == 2 and records.shape[0] else 1
        out = np.zeros((len(groups), words), dtype=np.uint64)
        for i, members in enumerate(groups):
            if members:
                out[i] = np.bitwise_xor.reduce(records[members], axis=0)
        return out


def check_determinism(circuit, shots=256, seed=7):
    """
    Raise unless every detector and observable is fixed without noise

    Raises:
        NondeterministicDetectorError: naming the first offending index
    """
    sim = FrameSimulator(circuit)
    result = sim.run(shots, np.random.default_rng(seed), noise=False, randomize=True)
    detectors = unpack_bits(sim.detector_flips(result), shots)
    bad = np.flatnonzero(detectors.any(axis=1))
    if bad.size:
        raise NondeterministicDetectorError(f"Detector D{bad[0]} is not deterministic")
    observables = unpack_bits(sim.observable_flips(result), shots)
    bad = np.flatnonzero(observables.any(axis=1))
    if bad.size:
        raise NondeterministicDetectorError(f"Observable L{bad[0]} is not deterministic")
    return True


###############################################################################
# Detector error model
###############################################################################

class DetectorErrorModel:
    ###############################################################################
    # DetectorErrorModel - Independent mechanisms with detector/observable symptoms
    ###############################################################################

    def __init__(self, mechanisms, num_detectors, num_observables, postselect=()):
        """
        Initialize DetectorErrorModel

        Args:
            mechanisms: List of (probability, detector tuple, observable tuple)
            num_detectors: Detector count D
            num_observables: Observable count
            postselect: Indices of postselection detectors
        """
        for p, dets, obs in mechanisms:
            if not 0 < p <= 0.5:
                raise ValueError(f"Mechanism probability must lie in (0, 0.5], got {p}")
            if any(not 0 <= d < num_detectors for d in dets) or any(not 0 <= o < num_observables for o in obs):
                raise ValueError(f"Mechanism symptom out of range: D{list(dets)} L{list(obs)}")
        self.mechanisms = [(float(p), tuple(dets), tuple(obs)) for p, dets, obs in mechanisms]
        self.num_detectors = num_detectors
        self.num_observables = num_observables
        self.postselect = tuple(postselect)

    def __len__(self):
        return len(self.mechanisms)

    def priors(self):
        return np.array([p for p, _, _ in self.mechanisms], dtype=float)

    def check_matrix(self):
        """(detectors, mechanisms) bool matrix"""
        h = np.zeros((self.num_detectors, len(self.mechanisms)), dtype=bool)
        for j, (_, dets, _) in enumerate(self.mechanisms):
            h[list(dets), j] = True
        return h

    def observable_matrix(self):
        """(observables, mechanisms) bool matrix"""
        l = np.zeros((self.num_observables, len(self.mechanisms)), dtype=bool)
        for j, (_, _, obs) in enumerate(self.mechanisms):
            l[list(obs), j] = True
        return l

    def to_text(self):
        """Lines `error(p) D3 D17 L0`, plus detector/observable count declarations"""
        lines = []
        if self.postselect:
            lines.append('# postselect ' + ' '.join(f"D{d}" for d in self.postselect))
        for p, dets, obs in self.mechanisms:
            symptoms = ' '.join([f"D{d}" for d in dets] + [f"L{o}" for o in obs])
            lines.append(f"error({p!r}) {symptoms}")
        if self.num_detectors:
            lines.append(f"detector D{self.num_detectors - 1}")
        if self.num_observables:
            lines.append(f"logical_observable L{self.num_observables - 1}")
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text):
        """
        Parse the to_text format

        Raises:
            FormatError: on unrecognized lines
        """
        mechanisms, postselect = [], []
        num_detectors = num_observables = 0
        pattern = re.compile(r'^error\(([^)]+)\)((?:\s+[DL]\d+)*)\s*$')
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith('#'):
                if line.startswith('# postselect'):
                    postselect = [int(t[1:]) for t in line.split()[2:]]
                continue
            try:
                if line.startswith('detector '):
                    num_detectors = max(num_detectors, int(line.split()[1][1:]) + 1)
                    continue
                if line.startswith('logical_observable '):
                    num_observables = max(num_observables, int(line.split()[1][1:]) + 1)
                    continue
                match = pattern.match(line)
                if not match:
                    raise ValueError("unrecognized line")
                tokens = match.group(2).split()
                dets = tuple(int(t[1:]) for t in tokens if t[0] == 'D')
                obs = tuple(int(t[1:]) for t in tokens if t[0] == 'L')
                mechanisms.append((float(match.group(1)), dets, obs))
                num_detectors = max([num_detectors] + [d + 1 for d in dets])
                num_observables = max([num_observables] + [o + 1 for o in obs])
            except ValueError as e:
                raise FormatError(f"DEM line {number}: {e}: '{raw}'")
        return cls(mechanisms, num_detectors, num_observables, postselect)

    def to_stim(self):
        import stim

        return stim.DetectorErrorModel('\n'.join(line for line in self.to_text().splitlines()
                                                 if not line.startswith('#')))

    def __repr__(self):
        return (f"DetectorErrorModel(mechanisms={len(self.mechanisms)}, detectors={self.num_detectors}, "
                f"observables={self.num_observables})")


def single_fault_effects(circuit, faults=None, chunk=8192, data_qubits=None):
    """
    Propagate each elementary fault alone

    Args:
        circuit: Noisy Circuit
        faults: Faults to propagate (default: elementary_faults(circuit))
        chunk: Faults per frame batch
        data_qubits: Also return the final frame on these qubits

    Yields:
        tuple: (Fault, detector bool row, observable bool row[, x row, z row])
    """
    faults = elementary_faults(circuit) if faults is None else faults
    sim = FrameSimulator(circuit)
    for start in range(0, len(faults), chunk):
        batch = faults[start:start + chunk]
        result = sim.run(len(batch), noise=False, randomize=False, faults=batch)
        detectors = unpack_bits(sim.detector_flips(result), len(batch)).T
        observables = unpack_bits(sim.observable_flips(result), len(batch)).T
        if data_qubits is None:
            for f, fault in enumerate(batch):
                yield fault, detectors[f], observables[f]
        else:
            xs, zs = result.data_frames(data_qubits)
            for f, fault in enumerate(batch):
                yield fault, detectors[f], observables[f], xs[f], zs[f]


def merge_probability(p1, p2):
    """Probability that exactly one of two independent mechanisms fires"""
    return p1 * (1 - p2) + p2 * (1 - p1)


def extract_dem(circuit, check=True):
    """
    Detector error model of a noisy circuit by single-fault propagation

    Args:
        circuit: Circuit annotated with noise
        check: First verify that all detectors are deterministic

    Returns:
        DetectorErrorModel; faults without symptoms are dropped

    Raises:
        NondeterministicDetectorError: when a detector is not fixed without noise
    """
    started = time.time()
    if check:
        check_determinism(circuit.without_noise())
    merged = {}
    count = 0
    for fault, detectors, observables in single_fault_effects(circuit):
        count += 1
        key = (tuple(np.flatnonzero(detectors).tolist()), tuple(np.flatnonzero(observables).tolist()))
        if not key[0] and not key[1]:
            continue
        merged[key] = merge_probability(merged[key], fault.probability) if key in merged else fault.probability
    mechanisms = [(p, dets, obs) for (dets, obs), p in merged.items() if p > 0]
    dem = DetectorErrorModel(mechanisms, circuit.num_detectors, circuit.num_observables,
                             circuit.postselect_detectors())
    logger.info(f"Extracted DEM from {count} elementary faults: {len(dem)} mechanisms, "
                f"{dem.num_detectors} detectors in {time.time() - started:.1f}s")
    return dem


###############################################################################
# Sampling
###############################################################################

def _batches(shots, batch_size):
    if shots < 1:
        raise ValueError(f"shots must be at least 1, got {shots}")
    sizes = [batch_size] * (shots // batch_size)
    if shots % batch_size:
        sizes.append(shots % batch_size)
    return sizes


def sample(dem, shots, seed=7, batch_size=4096, packed=False):
    """
    Sample detector and observable flips from a DEM

    Args:
        dem: DetectorErrorModel
        shots: Number of shots (≥ 1)
        seed: Root seed; each batch draws from its own spawned stream
        batch_size: Shots per batch
        packed: Return np.packbits(..., axis=1) arrays instead of bools

    Returns:
        tuple: (detectors (shots, D), observables (shots, O))
    """
    h = dem.check_matrix().T.astype(np.uint8)
    l = dem.observable_matrix().T.astype(np.uint8)
    priors = dem.priors()
    sizes = _batches(shots, batch_size)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    detector_blocks, observable_blocks = [], []
    for size, stream in zip(sizes, streams):
        rng = np.random.Generator(np.random.PCG64(stream))
        fired = (rng.random((size, len(priors))) < priors).astype(np.uint8)
        detector_blocks.append((fired @ h) & 1)
        observable_blocks.append((fired @ l) & 1)
    detectors = np.vstack(detector_blocks).astype(bool)
    observables = np.vstack(observable_blocks).astype(bool)
    if packed:
        return np.packbits(detectors, axis=1), np.packbits(observables, axis=1)
    return detectors, observables


def sample_circuit(circuit, shots, seed=7, batch_size=4096):
    """
    Sample a noisy circuit directly with the frame simulator

    Returns:
        tuple: (detectors (shots, D), observables (shots, O)) bool arrays
    """
    sim = FrameSimulator(circuit)
    sizes = _batches(shots, batch_size)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    detector_blocks, observable_blocks = [], []
    for size, stream in zip(sizes, streams):
        result = sim.run(size, np.random.Generator(np.random.PCG64(stream)))
        detector_blocks.append(unpack_bits(sim.detector_flips(result), size).T)
        observable_blocks.append(unpack_bits(sim.observable_flips(result), size).T)
    return np.vstack(detector_blocks), np.vstack(observable_blocks)
