"""
###############################################################################
# Circuit - Clifford circuit IR, executable circuits and Pauli propagation
###############################################################################
# CliffordCircuit: gate words used for logical-action analysis.
# Circuit: resets, gates, measurements, ticks, detectors, observables, noise
#          channels and the FEEDBACK / PROXY markers used by the protocols.
#
# Text format (one instruction per line, round-trips exactly):
#     R Z 5
#     CX 3 7
#     M Z 5 -> r12
#     M(0.001) X 9 -> r13
#     DEPOLARIZE2(0.001) 3 7
#     DETECTOR r12 r30
#     DETECTOR[postselect] r4
#     OBSERVABLE 0 r44 r45
#     FEEDBACK r12 r14 Z3 Z5
#     PROXY 16 17 18
#     TICK
# A '[noiseless]' tag after the name excludes the instruction from noise.
###############################################################################
"""

import logging
from contextlib import contextmanager

import numpy as np

from .exceptions import CircuitError, FormatError, NonCliffordError
from .f2 import BitMatrix, BitVector
from .pauli import PauliOperator, SymplecticMatrix

logger = logging.getLogger(__name__)

SINGLE_QUBIT_GATES = ('I', 'X', 'Y', 'Z', 'H', 'S', 'S_DAG', 'SQRT_X', 'SQRT_X_DAG')
TWO_QUBIT_GATES = ('CX', 'CY', 'CZ', 'SWAP')
RESETS = {'R': 'Z', 'RX': 'X'}
MEASUREMENTS = {'M': 'Z', 'MX': 'X'}
NOISE_CHANNELS = ('DEPOLARIZE1', 'DEPOLARIZE2', 'X_ERROR', 'Y_ERROR', 'Z_ERROR')
ANNOTATIONS = ('TICK', 'DETECTOR', 'OBSERVABLE', 'FEEDBACK', 'PROXY')

# Aliases accepted by the gate-word parser
GATE_ALIASES = {'CNOT': 'CX', 'SDG': 'S_DAG', 'SDAG': 'S_DAG', 'SX': 'SQRT_X', 'SXDG': 'SQRT_X_DAG'}


###############################################################################
# Pauli propagation
###############################################################################

def propagate_gate(name, qubits, x, z):
    """
    Conjugate a batch of Pauli frames through one gate, in place

    Args:
        name: Gate name from SINGLE_QUBIT_GATES or TWO_QUBIT_GATES
        qubits: Targets (pairs for two-qubit gates)
        x, z: Arrays indexed by qubit along axis 0; bool or packed uint64

    Example:
        x = np.array([True, False]); z = np.zeros(2, dtype=bool)
        propagate_gate('CX', (0, 1), x, z)   # X0 -> X0 X1
    """
    if name in ('I', 'X', 'Y', 'Z'):
        return
    if name == 'H':
        for q in qubits:
            tmp = x[q].copy()
            x[q] = z[q]
            z[q] = tmp
    elif name in ('S', 'S_DAG'):
        for q in qubits:
            z[q] ^= x[q]
    elif name in ('SQRT_X', 'SQRT_X_DAG'):
        for q in qubits:
            x[q] ^= z[q]
    elif name == 'CX':
        for c, t in zip(qubits[::2], qubits[1::2]):
            x[t] ^= x[c]
            z[c] ^= z[t]
    elif name == 'CZ':
        for a, b in zip(qubits[::2], qubits[1::2]):
            z[a] ^= x[b]
            z[b] ^= x[a]
    elif name == 'CY':
        # S_t · CX · S_t†
        for c, t in zip(qubits[::2], qubits[1::2]):
            z[t] ^= x[t]
            x[t] ^= x[c]
            z[c] ^= z[t]
            z[t] ^= x[t]
    elif name == 'SWAP':
        for a, b in zip(qubits[::2], qubits[1::2]):
            for half in (x, z):
                tmp = half[a].copy()
                half[a] = half[b]
                half[b] = tmp
    else:
        raise NonCliffordError(f"Cannot propagate Paulis through '{name}'")


def normalize_gate_name(name):
    name = name.upper()
    return GATE_ALIASES.get(name, name)


def _parity_set(records):
    """Sorted records appearing an odd number of times"""
    odd = set()
    for r in records:
        odd.symmetric_difference_update({int(r)})
    return sorted(odd)


###############################################################################
# CliffordCircuit
###############################################################################

class CliffordCircuit:
    ###############################################################################
    # CliffordCircuit - Unitary gate word on n qubits (no measurements)
    ###############################################################################

    def __init__(self, n, ops=None):
        """
        Initialize CliffordCircuit

        Args:
            n: Number of qubits
            ops: Optional iterable of (name, q0[, q1]) tuples
        """
        self.n = n
        self.ops = []
        for op in ops or []:
            self.append(op[0], *op[1:])

    def append(self, name, *qubits):
        """
        Append one gate

        Raises:
            CircuitError: for unknown gates, out-of-range or repeated qubits
        """
        name = normalize_gate_name(name)
        qubits = tuple(int(q) for q in qubits)
        if name in SINGLE_QUBIT_GATES:
            if len(qubits) != 1:
                raise CircuitError(f"{name} takes one qubit, got {qubits}")
        elif name in TWO_QUBIT_GATES:
            if len(qubits) != 2:
                raise CircuitError(f"{name} takes two qubits, got {qubits}")
            if qubits[0] == qubits[1]:
                raise CircuitError(f"{name} needs distinct qubits, got {qubits}")
        else:
            raise CircuitError(f"Unknown Clifford gate '{name}'")
        for q in qubits:
            if not 0 <= q < self.n:
                raise CircuitError(f"Qubit {q} out of range for {self.n}-qubit circuit")
        self.ops.append((name,) + qubits)
        return self

    def extend(self, other):
        if other.n != self.n:
            raise CircuitError(f"Cannot extend a {self.n}-qubit circuit with a {other.n}-qubit one")
        self.ops.extend(other.ops)
        return self

    def __add__(self, other):
        return CliffordCircuit(self.n, self.ops).extend(other)

    def copy(self):
        return CliffordCircuit(self.n, self.ops)

    def relabeled(self, mapping, n=None):
        """Copy with qubit q renamed mapping[q]"""
        out = CliffordCircuit(n if n is not None else self.n)
        for name, *qubits in self.ops:
            out.append(name, *(mapping[q] for q in qubits))
        return out

    def gate_counts(self):
        counts = {}
        for name, *_ in self.ops:
            counts[name] = counts.get(name, 0) + 1
        return counts

    def two_qubit_gates(self):
        return [op for op in self.ops if op[0] in TWO_QUBIT_GATES]

    def is_single_qubit_layer(self):
        return all(op[0] in SINGLE_QUBIT_GATES for op in self.ops)

    ###########################################################################
    # Symplectic action
    ###########################################################################

    def conjugate(self, pauli):
        """Image of a Pauli under the circuit, phase dropped"""
        if pauli.n != self.n:
            raise ValueError(f"Pauli on {pauli.n} qubits, circuit on {self.n}")
        x = pauli.x.to_array().copy()
        z = pauli.z.to_array().copy()
        for name, *qubits in self.ops:
            propagate_gate(name, qubits, x, z)
        return PauliOperator.from_symplectic(BitVector.from_bits(np.concatenate([x, z])))

    def symplectic_matrix(self):
        """2n x 2n SymplecticMatrix; row i is the image of basis vector i"""
        n = self.n
        x = np.zeros((n, 2 * n), dtype=bool)
        z = np.zeros((n, 2 * n), dtype=bool)
        x[:, :n] = np.eye(n, dtype=bool)
        z[:, n:] = np.eye(n, dtype=bool)
        for name, *qubits in self.ops:
            propagate_gate(name, qubits, x, z)
        return SymplecticMatrix(BitMatrix.from_array(np.hstack([x.T, z.T]), 2 * n))

    ###########################################################################
    # Words
    ###########################################################################

    def to_word(self, one_based=False):
        """Compact word, e.g. 'H0 H1 SWAP(2,3)'"""
        shift = 1 if one_based else 0
        parts = []
        for name, *qubits in self.ops:
            if len(qubits) == 1:
                parts.append(f"{name}{qubits[0] + shift}")
            else:
                parts.append(f"{name}({','.join(str(q + shift) for q in qubits)})")
        return ' '.join(parts)

    @classmethod
    def from_word(cls, n, word, one_based=False):
        """
        Parse a word produced by to_word

        Example:
            CliffordCircuit.from_word(8, 'SWAP(3,7) SWAP(4,8)', one_based=True)
        """
        circuit = cls(n)
        shift = 1 if one_based else 0
        for token in word.split():
            if '(' in token:
                name, _, rest = token.partition('(')
                qubits = [int(q) - shift for q in rest.rstrip(')').split(',')]
            else:
                stripped = token.rstrip('0123456789')
                name, qubits = stripped, [int(token[len(stripped):]) - shift]
            circuit.append(name, *qubits)
        return circuit

    def to_circuit(self, noiseless=False):
        """Embed into an executable Circuit"""
        circuit = Circuit(self.n)
        for name, *qubits in self.ops:
            circuit.gate(name, *qubits, noiseless=noiseless)
        return circuit

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __eq__(self, other):
        return isinstance(other, CliffordCircuit) and self.n == other.n and self.ops == other.ops

    def __repr__(self):
        return f"CliffordCircuit(n={self.n}, '{self.to_word()}')"


###############################################################################
# Executable circuit
###############################################################################

class Instruction:
    ###############################################################################
    # Instruction - One line of a Circuit
    ###############################################################################

    __slots__ = ('name', 'targets', 'args', 'tags', 'letters')

    def __init__(self, name, targets=(), args=(), tags=(), letters=''):
        self.name = name
        self.targets = tuple(int(t) for t in targets)
        self.args = tuple(args)
        self.tags = frozenset(tags)
        self.letters = letters

    @property
    def noiseless(self):
        return 'noiseless' in self.tags

    @property
    def postselect(self):
        return 'postselect' in self.tags

    def is_gate(self):
        return self.name in SINGLE_QUBIT_GATES or self.name in TWO_QUBIT_GATES

    def qubits(self):
        """Qubits acted on (empty for detectors and observables)"""
        if self.name in ('DETECTOR', 'OBSERVABLE', 'TICK'):
            return ()
        return self.targets

    def __eq__(self, other):
        return isinstance(other, Instruction) and (self.name, self.targets, self.args, self.tags, self.letters) == \
            (other.name, other.targets, other.args, other.tags, other.letters)

    def __hash__(self):
        return hash((self.name, self.targets, self.args, self.tags, self.letters))

    def __repr__(self):
        return f"Instruction({self.name}, {self.targets}, {self.args}, {sorted(self.tags)})"


class Circuit:
    ###############################################################################
    # Circuit - Executable stabilizer circuit with a measurement record
    # Detectors and observables refer to absolute record indices
    ###############################################################################

    def __init__(self, n_qubits=0):
        """
        Initialize Circuit

        Args:
            n_qubits: Initial qubit count (grows as higher qubits are used)
        """
        self.n_qubits = n_qubits
        self.instructions = []
        self.num_measurements = 0
        self.num_detectors = 0
        self.num_observables = 0
        self._noiseless_depth = 0

    ###########################################################################
    # Building
    ###########################################################################

    @contextmanager
    def noiseless_region(self):
        """Instructions appended inside the block are tagged noiseless"""
        self._noiseless_depth += 1
        try:
            yield self
        finally:
            self._noiseless_depth -= 1

    def _tags(self, noiseless, extra=()):
        tags = set(extra)
        if noiseless or self._noiseless_depth:
            tags.add('noiseless')
        return tags

    def _touch(self, qubits):
        for q in qubits:
            if q < 0:
                raise CircuitError(f"Negative qubit index {q}")
            self.n_qubits = max(self.n_qubits, q + 1)

    def append(self, instruction):
        """Append a prepared Instruction, validating record references"""
        name = instruction.name
        if name in ('DETECTOR', 'OBSERVABLE'):
            for r in instruction.targets:
                if not 0 <= r < self.num_measurements:
                    raise CircuitError(f"{name} references record r{r}, only {self.num_measurements} exist")
            if name == 'DETECTOR':
                if not instruction.targets:
                    raise CircuitError("DETECTOR must reference at least one record")
                self.num_detectors += 1
            else:
                self.num_observables = max(self.num_observables, int(instruction.args[0]) + 1)
        elif name == 'FEEDBACK':
            if not instruction.args:
                raise CircuitError("FEEDBACK must reference at least one record")
            for r in instruction.args:
                if not 0 <= r < self.num_measurements:
                    raise CircuitError(f"FEEDBACK references record r{r} before it exists")
            self._touch(instruction.targets)
        elif name in MEASUREMENTS:
            self._touch(instruction.targets)
            self.num_measurements += len(instruction.targets)
        elif name in TWO_QUBIT_GATES:
            if len(instruction.targets) % 2:
                raise CircuitError(f"{name} needs target pairs, got {instruction.targets}")
            for a, b in zip(instruction.targets[::2], instruction.targets[1::2]):
                if a == b:
                    raise CircuitError(f"{name} needs distinct qubits, got ({a}, {b})")
            self._touch(instruction.targets)
        elif name in SINGLE_QUBIT_GATES or name in RESETS or name in NOISE_CHANNELS or name == 'PROXY':
            self._touch(instruction.targets)
        elif name != 'TICK':
            raise CircuitError(f"Unknown instruction '{name}'")
        self.instructions.append(instruction)
        return self

    def gate(self, name, *qubits, noiseless=False):
        name = normalize_gate_name(name)
        if name not in SINGLE_QUBIT_GATES and name not in TWO_QUBIT_GATES:
            raise NonCliffordError(f"'{name}' is not a supported Clifford gate")
        return self.append(Instruction(name, qubits, tags=self._tags(noiseless)))

    def reset(self, qubits, basis='Z', noiseless=False):
        name = 'R' if basis == 'Z' else 'RX'
        if basis not in ('Z', 'X'):
            raise CircuitError(f"Unsupported reset basis '{basis}'")
        qubits = [qubits] if np.isscalar(qubits) else list(qubits)
        return self.append(Instruction(name, qubits, tags=self._tags(noiseless)))

    def measure(self, qubit, basis='Z', flip=0.0, noiseless=False, tags=()):
        """
        Measure one qubit

        Args:
            qubit: Target qubit
            basis: 'Z' or 'X'
            flip: Classical flip probability attached to the result
            tags: Extra tags (e.g. 'proxy' for slots whose flip the proxy sets)

        Returns:
            int: record index of the result
        """
        if basis not in ('Z', 'X'):
            raise CircuitError(f"Unsupported measurement basis '{basis}'")
        name = 'M' if basis == 'Z' else 'MX'
        record = self.num_measurements
        args = (float(flip),) if flip else ()
        self.append(Instruction(name, (qubit,), args, tags=self._tags(noiseless, tags)))
        return record

    def tick(self):
        return self.append(Instruction('TICK', tags=self._tags(False)))

    def detector(self, records, postselect=False):
        """Declare a detector over record indices; returns its index"""
        index = self.num_detectors
        tags = {'postselect'} if postselect else set()
        self.append(Instruction('DETECTOR', _parity_set(records), tags=tags))
        return index

    def observable(self, index, records):
        return self.append(Instruction('OBSERVABLE', _parity_set(records), (int(index),)))

    def feedback(self, records, pauli, qubits=None):
        """
        Pauli correction conditioned on the parity of measurement results

        Args:
            records: Record index, or indices whose parity controls the correction
            pauli: PauliOperator (on qubits, or on all circuit qubits when qubits is None)
            qubits: Optional qubit list the Pauli is laid on
        """
        letters = pauli.letters()
        qubits = list(range(pauli.n)) if qubits is None else list(qubits)
        support = [(q, ch) for q, ch in zip(qubits, letters) if ch != 'I']
        records = [records] if np.isscalar(records) else list(records)
        return self.append(Instruction('FEEDBACK', [q for q, _ in support], tuple(_parity_set(records)),
                                       tags=self._tags(False), letters=''.join(ch for _, ch in support)))

    def proxy(self, qubits):
        """Mark where the prep-noise proxy depolarizes fresh qubits"""
        return self.append(Instruction('PROXY', qubits))

    def channel(self, name, qubits, probability):
        if name not in NOISE_CHANNELS:
            raise CircuitError(f"Unknown noise channel '{name}'")
        return self.append(Instruction(name, qubits, (float(probability),)))

    def extend(self, other):
        """Append another circuit, shifting its record references"""
        offset = self.num_measurements
        for inst in other.instructions:
            if inst.name in ('DETECTOR', 'OBSERVABLE'):
                inst = Instruction(inst.name, [r + offset for r in inst.targets], inst.args, inst.tags)
            elif inst.name == 'FEEDBACK':
                inst = Instruction('FEEDBACK', inst.targets, tuple(r + offset for r in inst.args), inst.tags, inst.letters)
            self.append(inst)
        return offset

    def copy(self):
        out = Circuit(self.n_qubits)
        out.extend(self)
        return out

    ###########################################################################
    # Queries
    ###########################################################################

    def detectors(self):
        """List of (records, postselect) per detector, in index order"""
        return [(inst.targets, inst.postselect) for inst in self.instructions if inst.name == 'DETECTOR']

    def postselect_detectors(self):
        return [i for i, (_, post) in enumerate(self.detectors()) if post]

    def observables(self):
        """Dict observable index -> record set (repeated declarations XOR together)"""
        out = {}
        for inst in self.instructions:
            if inst.name == 'OBSERVABLE':
                current = set(out.get(inst.args[0], ()))
                out[inst.args[0]] = tuple(sorted(current.symmetric_difference(inst.targets)))
        return out

    def depth(self):
        """Number of TICK layers"""
        return sum(1 for inst in self.instructions if inst.name == 'TICK')

    def layers(self):
        """Instructions grouped between TICKs"""
        layers, current = [], []
        for inst in self.instructions:
            if inst.name == 'TICK':
                layers.append(current)
                current = []
            else:
                current.append(inst)
        if current:
            layers.append(current)
        return layers

    def count(self, name):
        return sum(len(inst.targets) // (2 if name in TWO_QUBIT_GATES else 1)
                   for inst in self.instructions if inst.name == name)

    def has_noise(self):
        return any(inst.name in NOISE_CHANNELS or (inst.name in MEASUREMENTS and inst.args)
                   for inst in self.instructions)

    def without_noise(self):
        out = Circuit(self.n_qubits)
        for inst in self.instructions:
            if inst.name in NOISE_CHANNELS:
                continue
            if inst.name in MEASUREMENTS and inst.args:
                inst = Instruction(inst.name, inst.targets, (), inst.tags)
            out.append(inst)
        return out

    def __len__(self):
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __eq__(self, other):
        return isinstance(other, Circuit) and self.n_qubits == other.n_qubits and \
            self.instructions == other.instructions

    def __repr__(self):
        return (f"Circuit(qubits={self.n_qubits}, instructions={len(self.instructions)}, "
                f"measurements={self.num_measurements}, detectors={self.num_detectors}, "
                f"observables={self.num_observables})")

    ###########################################################################
    # Text format
    ###########################################################################

    def to_text(self):
        """Serialize in the line format described at the top of this module"""
        lines = [f"QUBITS {self.n_qubits}"]
        record = 0
        for inst in self.instructions:
            head = inst.name
            if inst.args and inst.name in NOISE_CHANNELS + tuple(MEASUREMENTS):
                head += f"({inst.args[0]!r})"
            tags = sorted(inst.tags)
            if tags:
                head += f"[{','.join(tags)}]"
            if inst.name in MEASUREMENTS:
                lines.append(f"{head} {MEASUREMENTS[inst.name]} {inst.targets[0]} -> r{record}")
                record += 1
            elif inst.name in RESETS:
                lines.append(f"{head} {RESETS[inst.name]} {' '.join(map(str, inst.targets))}")
            elif inst.name == 'DETECTOR':
                lines.append(f"{head} {' '.join(f'r{r}' for r in inst.targets)}")
            elif inst.name == 'OBSERVABLE':
                lines.append(f"{head} {inst.args[0]} {' '.join(f'r{r}' for r in inst.targets)}".rstrip())
            elif inst.name == 'FEEDBACK':
                paulis = ' '.join(f"{ch}{q}" for ch, q in zip(inst.letters, inst.targets))
                records = ' '.join(f"r{r}" for r in inst.args)
                lines.append(f"{head} {records} {paulis}".rstrip())
            elif inst.name == 'TICK':
                lines.append(head)
            else:
                lines.append(f"{head} {' '.join(map(str, inst.targets))}")
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text):
        """
        Parse the line format

        Raises:
            FormatError: on malformed lines or record mismatches
        """
        circuit = cls()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue
            try:
                circuit._parse_line(line)
            except (ValueError, IndexError, CircuitError) as exc:
                raise FormatError(f"line {lineno}: {exc}: '{line}'")
        return circuit

    def _parse_line(self, line):
        head, _, rest = line.partition(' ')
        tokens = rest.split()
        tags = ()
        if '[' in head:
            head, _, tag_text = head.partition('[')
            tags = tuple(t for t in tag_text.rstrip(']').split(',') if t)
        args = ()
        if '(' in head:
            head, _, arg_text = head.partition('(')
            args = (float(arg_text.rstrip(')')),)
        if head == 'QUBITS':
            self.n_qubits = max(self.n_qubits, int(tokens[0]))
        elif head in MEASUREMENTS:
            basis, qubit, arrow, label = tokens
            if arrow != '->' or basis != MEASUREMENTS[head]:
                raise ValueError("expected '<basis> <qubit> -> r<index>'")
            if int(label.lstrip('r')) != self.num_measurements:
                raise ValueError(f"record label {label} out of sequence")
            self.append(Instruction(head, (int(qubit),), args, tags))
        elif head in RESETS:
            if tokens[0] != RESETS[head]:
                raise ValueError(f"basis {tokens[0]} does not match {head}")
            self.append(Instruction(head, [int(t) for t in tokens[1:]], args, tags))
        elif head == 'DETECTOR':
            self.append(Instruction(head, [int(t.lstrip('r')) for t in tokens], args, tags))
        elif head == 'OBSERVABLE':
            self.append(Instruction(head, [int(t.lstrip('r')) for t in tokens[1:]], (int(tokens[0]),), tags))
        elif head == 'FEEDBACK':
            records = tuple(int(t[1:]) for t in tokens if t.startswith('r'))
            paulis = [t for t in tokens if not t.startswith('r')]
            letters = ''.join(t[0] for t in paulis)
            qubits = [int(t[1:]) for t in paulis]
            self.append(Instruction(head, qubits, records, tags, letters))
        elif head == 'TICK':
            self.append(Instruction(head, (), args, tags))
        else:
            self.append(Instruction(head, [int(t) for t in tokens], args, tags))

    ###########################################################################
    # stim export
    ###########################################################################

    def to_stim(self):
        """
        Equivalent stim.Circuit (record references become lookbacks)

        PROXY markers carry no noise until annotated and are dropped here.
        """
        import stim

        out = stim.Circuit()
        record = 0
        for inst in self.instructions:
            name = inst.name
            if name == 'TICK':
                out.append('TICK')
            elif name in MEASUREMENTS:
                out.append(name, list(inst.targets), list(inst.args))
                record += len(inst.targets)
            elif name in ('DETECTOR', 'OBSERVABLE'):
                targets = [stim.target_rec(r - record) for r in inst.targets]
                if name == 'DETECTOR':
                    out.append('DETECTOR', targets)
                else:
                    out.append('OBSERVABLE_INCLUDE', targets, [inst.args[0]])
            elif name == 'FEEDBACK':
                for r in inst.args:
                    control = stim.target_rec(r - record)
                    for letter, q in zip(inst.letters, inst.targets):
                        out.append({'X': 'CX', 'Y': 'CY', 'Z': 'CZ'}[letter], [control, q])
            elif name == 'PROXY':
                continue
            else:
                out.append(name, list(inst.targets), list(inst.args))
        return out
