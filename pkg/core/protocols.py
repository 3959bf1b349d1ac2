"""
###############################################################################
# Protocols - Fault-tolerant circuit builders for CSD codes
###############################################################################
# Qubit layout shared by every builder on a code with B C4 blocks (N = 4B):
#     0 .. N-1            data
#     N + 2b, N + 2b + 1  the two ancillas of block b (syndrome/flag or X/Z)
#     N + 2B + j          j-th generator ancilla of a parallel batch
# Steane rounds and injection circuits use whole extra code blocks instead.
#
# Abort conditions are postselection detectors; acceptance is decided when
# the samples are analysed, so every circuit here is static.
###############################################################################
"""

import logging

import numpy as np

from .circuit import MEASUREMENTS, CliffordCircuit, Circuit
from .exceptions import CircuitError, NonCliffordError, ProtocolError
from .f2 import BitMatrix, rref
from .gates import is_hadamard_swap_form, logical_action
from .pauli import PauliOperator

logger = logging.getLogger(__name__)

# Marker for a check whose value is fixed by the preparation
KNOWN = 'known'

INJECTION_KINDS = ('s_teleport', 'knill_s', 'sqrtx_teleport')

_CONTROLLED = {'X': 'CX', 'Y': 'CY', 'Z': 'CZ'}


class PrepPolicy:
    ###############################################################################
    # PrepPolicy - How a logical |0̄⟩ or |+̄⟩ is prepared and accepted
    ###############################################################################

    def __init__(self, basis='Z', allow_m=0, use_flagcilla=True):
        """
        Initialize PrepPolicy

        Args:
            basis: 'Z' prepares |0̄…0̄⟩, 'X' prepares |+̄…+̄⟩
            allow_m: Number of triggered postselection detectors still accepted
            use_flagcilla: Verify C4 blocks with the joint XXXX/ZZZZ circuit
                           after their first individual measurement; the
                           preparation always ends with individual rounds
        """
        if basis not in ('Z', 'X'):
            raise ValueError(f"basis must be 'Z' or 'X', got '{basis}'")
        if int(allow_m) != allow_m or allow_m < 0:
            raise ValueError(f"allow_m must be a non-negative integer, got {allow_m}")
        self.basis = basis
        self.allow_m = int(allow_m)
        self.use_flagcilla = bool(use_flagcilla)

    @property
    def dual(self):
        return 'X' if self.basis == 'Z' else 'Z'

    @property
    def m(self):
        """Shots are accepted when fewer than m postselection detectors trigger"""
        return self.allow_m + 1

    def accepts(self, triggered):
        """Shot acceptance from the number of triggered postselection detectors"""
        return np.asarray(triggered) <= self.allow_m

    def to_dict(self):
        return {'basis': self.basis, 'allow_m': self.allow_m, 'm': self.m, 'use_flagcilla': self.use_flagcilla}

    def __repr__(self):
        return f"PrepPolicy(basis='{self.basis}', allow_m={self.allow_m}, use_flagcilla={self.use_flagcilla})"


class Fragment:
    ###############################################################################
    # Fragment - A self-contained measurement gadget
    # records maps names ('syndrome', 'flag', 'X', 'Z') to local record indices
    ###############################################################################

    def __init__(self, circuit, records, blocks=()):
        self.circuit = circuit
        self.records = dict(records)
        self.blocks = tuple(blocks)

    def qubits(self):
        return {q for inst in self.circuit for q in inst.qubits()}

    def __repr__(self):
        return f"Fragment(blocks={list(self.blocks)}, depth={self.circuit.depth()})"


class CheckTracker:
    ###############################################################################
    # CheckTracker - Last known value of every C4 check
    # None: never measured (random); KNOWN: fixed by the preparation;
    # int: record index of the latest measurement
    ###############################################################################

    def __init__(self, n_blocks, known=()):
        self._last = [{basis: (KNOWN if basis in known else None) for basis in 'XZ'} for _ in range(n_blocks)]

    def previous(self, block, basis):
        return self._last[block][basis]

    def ready(self, block):
        """Both checks have a value a later measurement can be compared to"""
        return all(value is not None for value in self._last[block].values())

    def record(self, circuit, block, basis, record, postselect=True):
        """
        Store a new outcome and emit the comparison detector

        Returns:
            int or None: detector index, None when the previous value was random
        """
        previous = self._last[block][basis]
        self._last[block][basis] = record
        if previous is None:
            return None
        if previous == KNOWN:
            return circuit.detector([record], postselect)
        return circuit.detector([record, previous], postselect)


###############################################################################
# Layout helpers
###############################################################################

def block_ancillas(layout, block):
    base = layout.n_physical + 2 * block
    return base, base + 1


def generator_ancilla(layout, j):
    return layout.n_physical + 2 * layout.n_blocks + j


def _row_bits(code, basis, row):
    rows = code.hx if basis == 'X' else code.hz
    return rows.row(row).to_array()


def _concat_bits(code, layout, gen_index, basis):
    count = layout.n_concat(basis)
    if not 0 <= gen_index < count:
        raise ValueError(f"Concatenated {basis} generator {gen_index} out of range (0..{count - 1})")
    rows = (code.hx if basis == 'X' else code.hz).rows
    if layout.n_blocks + count > rows:
        raise ProtocolError(f"Layout expects {count} concatenated {basis} rows, "
                            f"the code has {rows - layout.n_blocks}")
    return _row_bits(code, basis, layout.n_blocks + gen_index)


def _other(basis):
    return 'X' if basis == 'Z' else 'Z'


###############################################################################
# Fragments
###############################################################################

def bare_cnot_order(support):
    """
    Data-qubit order for a bare generator measurement

    The first half of each block's support (blocks ascending) comes before the
    midpoint and the rest after, so a hook from either half leaves at most one
    data error per block.
    """
    per_block = {}
    for q in sorted(int(q) for q in support):
        per_block.setdefault(q // 4, []).append(q)
    first, second = [], []
    for block in sorted(per_block):
        qubits = per_block[block]
        half = (len(qubits) + 1) // 2
        first.extend(qubits[:half])
        second.extend(qubits[half:])
    return first + second


def c4_checks_to_verify(code, gen_index, layout, basis='X'):
    """
    C4 blocks whose support overlaps a concatenated generator

    Example:
        c4_checks_to_verify(csd, 0, layout)   # [0, 1, 2, 3] for a weight-8 generator
    """
    return layout.blocks_touched(_concat_bits(code, layout, gen_index, basis))


def build_bare_measure(code, gen_index, layout, basis='X', ancilla=None):
    """
    Non fault-tolerant measurement of one concatenated generator

    Args:
        code: CSD code
        gen_index: Index among the concatenated generators (0-based)
        layout: ConcatLayout of the code
        basis: Generator type, 'X' or 'Z'
        ancilla: Ancilla qubit (default: the first generator ancilla)

    Returns:
        Fragment with record 'syndrome'

    Raises:
        ValueError: for an out-of-range index or an empty generator
    """
    bits = _concat_bits(code, layout, gen_index, basis)
    support = np.flatnonzero(bits)
    if support.size == 0:
        raise ValueError(f"Concatenated generator {gen_index} has empty support")
    a = generator_ancilla(layout, 0) if ancilla is None else ancilla
    circuit = Circuit()
    circuit.reset(a, basis)
    circuit.tick()
    for q in bare_cnot_order(support):
        if basis == 'X':
            circuit.gate('CX', a, int(q))
        else:
            circuit.gate('CX', int(q), a)
        circuit.tick()
    circuit.measure(a, basis)
    circuit.tick()
    return Fragment(circuit, {'syndrome': 0}, layout.blocks_touched(bits))


def _build_flagged(layout, block, basis):
    d0, d1, d2, d3 = layout.blocks[block]
    a, f = block_ancillas(layout, block)
    circuit = Circuit()
    circuit.reset(a, basis)
    circuit.reset(f, _other(basis))
    circuit.tick()
    # Flag couplings after the first and third data CNOT
    for step in (d0, None, d1, d2, None, d3):
        if basis == 'X':
            circuit.gate('CX', a, f if step is None else step)
        else:
            circuit.gate('CX', f if step is None else step, a)
        circuit.tick()
    circuit.measure(a, basis)
    circuit.measure(f, _other(basis))
    circuit.tick()
    return Fragment(circuit, {'syndrome': 0, 'flag': 1}, (block,))


def build_flag_c4_x(layout, block):
    """XXXX of one C4 block with a single flag qubit; records 'syndrome' and 'flag'"""
    return _build_flagged(layout, block, 'X')


def build_flag_c4_z(layout, block):
    """ZZZZ of one C4 block with a single flag qubit; records 'syndrome' and 'flag'"""
    return _build_flagged(layout, block, 'Z')


def build_flagcilla_c4(layout, block, tracker):
    """
    Joint XXXX/ZZZZ measurement where each ancilla flags the other's hooks

    Args:
        layout: ConcatLayout
        block: C4 block index
        tracker: CheckTracker holding earlier values of the block's checks

    Returns:
        Fragment with records 'X' and 'Z'

    Raises:
        ProtocolError: when either check has not been measured or fixed before
    """
    if not tracker.ready(block):
        raise ProtocolError(f"Block {block} needs individual XXXX and ZZZZ values before a flagcilla round")
    d0, d1, d2, d3 = layout.blocks[block]
    ax, az = block_ancillas(layout, block)
    circuit = Circuit()
    circuit.reset(ax, 'X')
    circuit.reset(az, 'Z')
    circuit.tick()
    for x_target, z_control in ((d0, d1), (d1, d0), (d2, d3), (d3, d2)):
        circuit.gate('CX', ax, x_target)
        circuit.gate('CX', z_control, az)
        circuit.tick()
    circuit.measure(ax, 'X')
    circuit.measure(az, 'Z')
    circuit.tick()
    return Fragment(circuit, {'X': 0, 'Z': 1}, (block,))


def merge_parallel(fragments):
    """
    Interleave fragments on disjoint qubits layer by layer

    Returns:
        tuple: (Circuit, list of record dicts with indices into that circuit)

    Raises:
        ProtocolError: when two fragments share a qubit
    """
    seen = set()
    for fragment in fragments:
        qubits = fragment.qubits()
        if qubits & seen:
            raise ProtocolError(f"Parallel fragments overlap on qubits {sorted(qubits & seen)}")
        seen |= qubits
    merged = Circuit()
    layered = [fragment.circuit.layers() for fragment in fragments]
    local_maps = [{} for _ in fragments]
    counters = [0] * len(fragments)
    for depth in range(max((len(layers) for layers in layered), default=0)):
        for f, layers in enumerate(layered):
            if depth >= len(layers):
                continue
            for inst in layers[depth]:
                if inst.name in ('DETECTOR', 'OBSERVABLE', 'FEEDBACK'):
                    raise CircuitError("Fragments may not declare detectors, observables or feedback")
                if inst.name in MEASUREMENTS:
                    local_maps[f][counters[f]] = merged.num_measurements
                    counters[f] += 1
                merged.append(inst)
        merged.tick()
    records = [{name: local_maps[f][local] for name, local in fragment.records.items()}
               for f, fragment in enumerate(fragments)]
    return merged, records


def run_parallel(circuit, fragments):
    """Append fragments side by side; returns their records as absolute indices"""
    if not fragments:
        return []
    merged, records = merge_parallel(fragments)
    offset = circuit.extend(merged)
    return [{name: r + offset for name, r in rec.items()} for rec in records]


def parallel_batches(code, layout, basis='X'):
    """
    Greedy block-disjoint batches of concatenated generators, by index

    Generators with empty support are skipped.
    """
    touched = {}
    for g in range(layout.n_concat(basis)):
        blocks = set(c4_checks_to_verify(code, g, layout, basis))
        if blocks:
            touched[g] = blocks
        else:
            logger.warning(f"Skipping concatenated {basis} generator {g}: empty support")
    remaining = sorted(touched)
    batches = []
    while remaining:
        used, batch = set(), []
        for g in remaining:
            if touched[g] & used:
                continue
            batch.append(g)
            used |= touched[g]
        batches.append(batch)
        remaining = [g for g in remaining if g not in batch]
    return batches


###############################################################################
# Verification rounds
###############################################################################

def _flagged_round(circuit, tracker, layout, blocks, basis):
    build = build_flag_c4_x if basis == 'X' else build_flag_c4_z
    records = run_parallel(circuit, [build(layout, b) for b in blocks])
    for block, rec in zip(blocks, records):
        tracker.record(circuit, block, basis, rec['syndrome'])
        circuit.detector([rec['flag']], postselect=True)


def _flagcilla_round(circuit, tracker, layout, blocks):
    records = run_parallel(circuit, [build_flagcilla_c4(layout, b, tracker) for b in blocks])
    for block, rec in zip(blocks, records):
        tracker.record(circuit, block, 'X', rec['X'])
        tracker.record(circuit, block, 'Z', rec['Z'])


def _closing_rounds(circuit, tracker, layout, blocks, bases):
    """
    Individual flagged rounds that end a gadget

    A single fault in a flagcilla round can leave an unflagged weight-2 error
    on its block, so no gadget ends on one.
    """
    for basis in bases:
        _flagged_round(circuit, tracker, layout, blocks, basis)


def _verify_blocks(circuit, tracker, layout, blocks, basis, policy, verified):
    blocks = list(blocks)
    joint = [b for b in blocks if policy.use_flagcilla and b in verified and tracker.ready(b)]
    single = [b for b in blocks if b not in joint]
    if single:
        _flagged_round(circuit, tracker, layout, single, basis)
    if joint:
        _flagcilla_round(circuit, tracker, layout, joint)
    verified.update(blocks)


###############################################################################
# Logical state preparation
###############################################################################

def build_state_prep(code, layout, policy=None):
    """
    Fault-tolerant bare-ancilla preparation of |0̄…0̄⟩ or |+̄…+̄⟩

    Args:
        code: Self-dual CSD code
        layout: ConcatLayout of the code
        policy: PrepPolicy (default: |0̄⟩ with flagcilla verification)

    Returns:
        Circuit whose detectors are all postselection detectors. The final
        readout and observables are added by append_readout.

    Example:
        prep = build_state_prep(construction.csd, construction.layout)
    """
    circuit, _ = _state_prep(code, layout, policy or PrepPolicy())
    return circuit


def build_prep_experiment_circuit(code, layout, policy=None):
    """State prep followed by a noiseless destructive readout in the prepared basis"""
    policy = policy or PrepPolicy()
    circuit, tracker = _state_prep(code, layout, policy)
    append_readout(circuit, code, policy.basis, prep_readout_previous(code, layout, tracker, policy.basis))
    return circuit


def _state_prep(code, layout, policy):
    basis, dual = policy.basis, policy.dual
    n_data = layout.n_physical
    blocks = list(range(layout.n_blocks))
    batches = parallel_batches(code, layout, dual)
    width = max((len(batch) for batch in batches), default=0)
    circuit = Circuit(n_data + 2 * layout.n_blocks + width)

    circuit.reset(range(n_data), basis)
    circuit.tick()
    tracker = CheckTracker(layout.n_blocks, known=(basis,))

    # Dual-type C4 checks are random on the reset state
    _flagged_round(circuit, tracker, layout, blocks, dual)

    verified = set()
    for batch in batches:
        fragments = [build_bare_measure(code, g, layout, dual, ancilla=generator_ancilla(layout, j))
                     for j, g in enumerate(batch)]
        run_parallel(circuit, fragments)
        touched = sorted({b for fragment in fragments for b in fragment.blocks})
        _verify_blocks(circuit, tracker, layout, touched, basis, policy, verified)

    _closing_rounds(circuit, tracker, layout, blocks, (dual, basis))

    logger.info(f"State prep |{'0' if basis == 'Z' else '+'}̄⟩ on {code.parameters()}: "
                f"{len(batches)} batches, depth {circuit.depth()}, {circuit.num_detectors} detectors")
    return circuit, tracker


def append_readout(circuit, code, basis, previous=None, noiseless=True):
    """
    Destructive data readout with check detectors and logical observables

    Args:
        circuit: Circuit to extend
        code: CSS code on data qubits 0..n-1
        basis: Readout basis, 'Z' or 'X'
        previous: Dict check row -> KNOWN or tuple of records it must match
                  (rows missing from the dict get no detector)
        noiseless: Tag the readout noiseless

    Returns:
        list of data record indices
    """
    records = [circuit.measure(q, basis, noiseless=noiseless) for q in range(code.n)]
    circuit.tick()
    rows = (code.hz if basis == 'Z' else code.hx).to_array()
    previous = previous or {}
    for r, row in enumerate(rows):
        if r not in previous:
            continue
        parity = [records[q] for q in np.flatnonzero(row)]
        prior = previous[r]
        circuit.detector(parity if prior == KNOWN else parity + list(prior))
    logicals = code.logical_z_matrix() if basis == 'Z' else code.logical_x_matrix()
    for index, row in enumerate(logicals.to_array()):
        circuit.observable(index, [records[q] for q in np.flatnonzero(row)])
    return records


def prep_readout_previous(code, layout, tracker, basis):
    """Comparison targets for reading out a freshly prepared state"""
    previous = {}
    for r in range((code.hz if basis == 'Z' else code.hx).rows):
        if r < layout.n_blocks:
            last = tracker.previous(r, basis)
            previous[r] = KNOWN if last == KNOWN else (last,)
        else:
            previous[r] = KNOWN
    return previous


def prep_output_stabilizers(code, basis):
    """Stabilizers of the ideal output of build_state_prep"""
    return list(code.checks) + list(code.logical_z if basis == 'Z' else code.logical_x)


###############################################################################
# Logical Y measurement
###############################################################################

def logical_y(code, i):
    """Ȳ_i = i X̄_i Z̄_i as a Hermitian PauliOperator"""
    if not 0 <= i < code.n_logicals:
        raise ValueError(f"Logical index {i} out of range for k={code.n_logicals}")
    product = code.logical_x[i] * code.logical_z[i]
    y = PauliOperator(product.x, product.z, product.phase + 1)
    if y.phase % 2:
        raise ProtocolError(f"X̄_{i} and Z̄_{i} commute; Ȳ_{i} is not Hermitian")
    return y


def y_gate_order(pauli):
    """
    Controlled-Pauli order for measuring a logical Pauli with one ancilla

    With touched blocks b_1 < … < b_m, the first letter of b_1 … b_{m-1} and
    all but the last letter of b_m go first, then the rest of b_1 … b_{m-1}
    and finally the last letter of b_m. Every proper prefix of weight two or
    more then anticommutes with a check of b_1 or b_m, so an ancilla fault
    between two gates leaves a detectable or weight-1 data error.

    Returns:
        list of (qubit, letter)

    Raises:
        ProtocolError: when the Pauli touches fewer than two blocks
    """
    per_block = {}
    for q, letter in enumerate(pauli.letters()):
        if letter != 'I':
            per_block.setdefault(q // 4, []).append((q, letter))
    if len(per_block) < 2:
        raise ProtocolError(f"{pauli.to_string()} touches {len(per_block)} block(s); need at least two")
    *rest, last = sorted(per_block)
    first = [per_block[b][0] for b in rest] + per_block[last][:-1]
    second = [gate for b in rest for gate in per_block[b][1:]] + per_block[last][-1:]
    return first + second


def y_segments(pauli):
    """
    Split the y_gate_order targets into segments obeying the per-block rule:
    at most one CX and one CZ per block, or a CY alone on its block

    Returns:
        list of [(qubit, letter), ...]
    """
    segments, current, usage = [], [], {}
    for q, letter in y_gate_order(pauli):
        used = usage.get(q // 4, set())
        fits = not used if letter == 'Y' else (letter not in used and 'Y' not in used)
        if not fits:
            segments.append(current)
            current, usage = [], {}
        current.append((q, letter))
        usage.setdefault(q // 4, set()).add(letter)
    if current:
        segments.append(current)
    return segments


def y_check_schedule(segments):
    """
    Blocks to verify after each segment

    A block is checked once its applied part of Ȳ commutes with XXXX and
    ZZZZ, i.e. carries an even number of X-like and of Z-like letters.
    """
    counts, schedule = {}, []
    for segment in segments:
        touched = set()
        for q, letter in segment:
            x_count, z_count = counts.get(q // 4, (0, 0))
            counts[q // 4] = (x_count + (letter in 'XY'), z_count + (letter in 'ZY'))
            touched.add(q // 4)
        schedule.append(sorted(b for b in touched if counts[b][0] % 2 == 0 and counts[b][1] % 2 == 0))
    return schedule


def build_y_measurement(code, layout, logical_index, prepare=True):
    """
    Fault-tolerant measurement of Ȳ_i on a CSD block

    Args:
        code: CSD code
        layout: ConcatLayout
        logical_index: Logical qubit i
        prepare: Prefix a noiseless |+̄…+̄⟩ encoder

    Returns:
        Circuit; the second ancilla outcome and every check comparison carry
        postselection detectors, and flagged XXXX and ZZZZ rounds on all
        blocks close the gadget

    Raises:
        ValueError: if logical_index is out of range
    """
    y = logical_y(code, logical_index)
    n_data = layout.n_physical
    ancilla = generator_ancilla(layout, 0)
    circuit = Circuit(ancilla + 1)
    if prepare:
        with circuit.noiseless_region():
            circuit.reset(range(n_data), 'Z')
            _emit(circuit, encoder_circuit(code, 'X'), range(n_data))
            circuit.tick()
    tracker = CheckTracker(layout.n_blocks, known=('X', 'Z'))
    segments = y_segments(y)
    checks = y_check_schedule(segments)
    outcomes = []
    for _ in range(2):
        circuit.reset(ancilla, 'X')
        if y.phase == 2:
            circuit.gate('Z', ancilla)
        circuit.tick()
        for segment, checked in zip(segments, checks):
            for q, letter in segment:
                circuit.gate(_CONTROLLED[letter], ancilla, q)
                circuit.tick()
            _flagcilla_round(circuit, tracker, layout, checked)
        record = circuit.measure(ancilla, 'X')
        circuit.tick()
        circuit.feedback(record, code.logical_z[logical_index], qubits=range(n_data))
        outcomes.append(record)
    circuit.detector([outcomes[1]], postselect=True)
    _closing_rounds(circuit, tracker, layout, range(layout.n_blocks), ('X', 'Z'))
    logger.info(f"Ȳ_{logical_index} measurement on {code.parameters()}: {len(segments)} segments, "
                f"depth {circuit.depth()}")
    return circuit


def y_output_stabilizers(code, logical_index):
    """Checks, Ȳ_i and X̄_j (j ≠ i): the ideal state after build_y_measurement"""
    others = [p for j, p in enumerate(code.logical_x) if j != logical_index]
    return list(code.checks) + [logical_y(code, logical_index)] + others


###############################################################################
# Encoders
###############################################################################

def encoder_circuit(code, basis='Z'):
    """
    Unitary CSS encoder acting on |0…0⟩

    Args:
        code: CSS code
        basis: 'Z' encodes |0̄…0̄⟩, 'X' encodes |+̄…+̄⟩

    Returns:
        CliffordCircuit: H on the pivots of rref(hx [+ X̄ rows]), then CX from
        each pivot to the rest of its row
    """
    rows = code.hx.to_array()
    if basis == 'X':
        rows = np.vstack([rows, code.logical_x_matrix().to_array()])
    reduced, pivots, rank = rref(BitMatrix.from_array(rows, code.n))
    reduced = reduced.to_array()[:rank]
    circuit = CliffordCircuit(code.n, [('H', p) for p in pivots])
    for row, pivot in zip(reduced, pivots):
        for q in np.flatnonzero(row):
            if q != pivot:
                circuit.append('CX', pivot, int(q))
    return circuit


def stabilizer_state_encoder(stabilizers):
    """
    Unitary preparing the state with the given stabilizers from |0…0⟩

    Args:
        stabilizers: Hermitian PauliOperators of equal length, complete up to redundancy

    Returns:
        CliffordCircuit synthesised through stim's tableau elimination
    """
    import stim

    strings = []
    for p in stabilizers:
        if p.phase % 2:
            raise ValueError(f"Stabilizer {p.to_string()} is not Hermitian")
        strings.append(stim.PauliString(('-' if p.phase == 2 else '+') + p.letters()))
    tableau = stim.Tableau.from_stabilizers(strings, allow_redundant=True)
    n = len(tableau)
    out = CliffordCircuit(n)
    for inst in tableau.to_circuit(method='elimination'):
        name = inst.name
        if name == 'TICK':
            continue
        targets = [t.value for t in inst.targets_copy()]
        try:
            if name in ('CX', 'CY', 'CZ', 'SWAP'):
                for a, b in zip(targets[::2], targets[1::2]):
                    out.append(name, a, b)
            else:
                for q in targets:
                    out.append(name, q)
        except CircuitError:
            raise NonCliffordError(f"Encoder synthesis produced unsupported gate '{name}'")
    return out


def _emit(circuit, clifford, qubits, noiseless=True):
    qubits = list(qubits)
    for name, *targets in clifford:
        circuit.gate(name, *(qubits[t] for t in targets), noiseless=noiseless)


###############################################################################
# Steane syndrome extraction
###############################################################################

def _extract(circuit, code, layout, error_type, previous, offsets, detector_map=None):
    """
    One ancilla-block extraction: 'X' errors via |+̄⟩ and data→ancilla CNOT,
    'Z' errors via |0̄⟩ and ancilla→data CNOT
    """
    n = code.n
    ancilla = [offsets['ancilla'] + q for q in range(n)]
    check_type = 'Z' if error_type == 'X' else 'X'
    with circuit.noiseless_region():
        circuit.reset(ancilla, 'Z')
        _emit(circuit, encoder_circuit(code, 'X' if error_type == 'X' else 'Z'), ancilla)
        circuit.tick()
    circuit.proxy(ancilla)
    pairs = []
    for q in range(n):
        pairs.extend((q, ancilla[q]) if error_type == 'X' else (ancilla[q], q))
    circuit.gate('CX', *pairs)
    circuit.tick()
    records = [circuit.measure(a, check_type) for a in ancilla]
    circuit.tick()
    # Concatenated syndromes get a flip slot driven by the proxy; C4 ones stay exact
    slots = {}
    for j, row in enumerate(layout.concat_rows(check_type)):
        scratch = offsets['scratch'] + j
        circuit.reset(scratch, 'Z', noiseless=True)
        slots[row] = circuit.measure(scratch, 'Z', tags=('proxy',))
    if slots:
        circuit.tick()
    current = {}
    rows = (code.hz if check_type == 'Z' else code.hx).to_array()
    for r, row in enumerate(rows):
        parity = [records[q] for q in np.flatnonzero(row)]
        if r in slots:
            parity.append(slots[r])
        prior = previous.get((check_type, r))
        index = None
        if prior == KNOWN:
            index = circuit.detector(parity)
        elif prior is not None:
            index = circuit.detector(parity + list(prior))
        if index is not None and detector_map is not None:
            detector_map.setdefault((check_type, r), []).append(index)
        current[(check_type, r)] = tuple(parity)
    return current


def steane_offsets(code, layout):
    return {'ancilla': code.n, 'scratch': 2 * code.n}


def append_steane_round(circuit, code, layout, previous, extract=('X', 'Z'), detector_map=None):
    """
    Append one noisy Steane round

    Args:
        previous: Dict (check type, row) -> KNOWN or records from the last round
        extract: Error types to extract, in order
        detector_map: Optional dict filled with (check type, row) -> detector indices

    Returns:
        dict: the updated comparison targets
    """
    offsets = steane_offsets(code, layout)
    current = dict(previous)
    for error_type in extract:
        if error_type not in ('X', 'Z'):
            raise ValueError(f"Unknown error type '{error_type}'")
        current.update(_extract(circuit, code, layout, error_type, current, offsets, detector_map))
    return current


def _encode_data(circuit, code, basis):
    with circuit.noiseless_region():
        circuit.reset(range(code.n), 'Z')
        _emit(circuit, encoder_circuit(code, basis), range(code.n))
        circuit.tick()
    return {(t, r): KNOWN for t, rows in (('X', code.hx), ('Z', code.hz)) for r in range(rows.rows)}


def build_steane_round(code, layout, extract=('X', 'Z'), basis='Z'):
    """
    One Steane round on a noiselessly encoded codestate

    Returns:
        Circuit with a detector per extracted check
    """
    circuit = Circuit(2 * code.n + max(layout.n_concat_x, layout.n_concat_z))
    previous = _encode_data(circuit, code, basis)
    append_steane_round(circuit, code, layout, previous, extract)
    return circuit


def build_memory_circuit(code, layout, rounds, basis='Z', extract=('X', 'Z'), detector_map=None):
    """
    Noiseless encoding, `rounds` noisy Steane rounds, noiseless readout

    Args:
        code: CSD code
        layout: ConcatLayout
        rounds: Number of syndrome extraction rounds (typically the distance)
        basis: 'Z' protects Z̄ observables, 'X' protects X̄
        extract: Error types extracted per round
        detector_map: Optional dict filled with (check type, row) -> detector indices

    Returns:
        Circuit with one observable per logical qubit
    """
    if rounds < 1:
        raise ValueError(f"rounds must be at least 1, got {rounds}")
    circuit = Circuit(2 * code.n + max(layout.n_concat_x, layout.n_concat_z))
    previous = _encode_data(circuit, code, basis)
    for _ in range(rounds):
        previous = append_steane_round(circuit, code, layout, previous, extract, detector_map)
    readout = {r: previous[(basis, r)] for r in range((code.hz if basis == 'Z' else code.hx).rows)}
    append_readout(circuit, code, basis, readout)
    logger.info(f"Memory circuit on {code.parameters()}: {rounds} rounds, {circuit.num_detectors} detectors")
    return circuit


def build_proxy_prep_circuit(code, basis='Z'):
    """
    Noiseless encoding, a PROXY marker on every qubit, noiseless readout

    Decoding this circuit gives the logical error of a block prepared under
    the proxy alone, which is what the proxy strength is tuned against.
    """
    circuit = Circuit(code.n)
    previous = _encode_data(circuit, code, basis)
    circuit.proxy(list(range(code.n)))
    rows = (code.hz if basis == 'Z' else code.hx).rows
    append_readout(circuit, code, basis, {r: previous[(basis, r)] for r in range(rows)})
    return circuit


###############################################################################
# Injection by teleportation
###############################################################################

def _prepare(circuit, code, qubits, state):
    """Noiselessly prepare a code block: 'Z', 'X' or a list of stabilizers"""
    qubits = list(qubits)
    circuit.reset(qubits, 'Z', noiseless=True)
    if isinstance(state, str):
        _emit(circuit, encoder_circuit(code, state), qubits)
    else:
        _emit(circuit, stabilizer_state_encoder(state), qubits)
    circuit.tick()


def _transversal_cx(circuit, controls, targets):
    pairs = []
    for c, t in zip(controls, targets):
        pairs.extend((c, t))
    circuit.gate('CX', *pairs)
    circuit.tick()


def _parity_detectors(circuit, rows, records):
    for row in rows:
        circuit.detector([records[q] for q in np.flatnonzero(row)])


def _s_teleport(circuit, code, output, data):
    """CX(resource → data), Z readout of data, Ȳ_j fix-ups on the resource"""
    _transversal_cx(circuit, output, data)
    records = [circuit.measure(q, 'Z') for q in data]
    circuit.tick()
    _parity_detectors(circuit, code.hz.to_array(), records)
    for j, row in enumerate(code.logical_z_matrix().to_array()):
        circuit.feedback([records[q] for q in np.flatnonzero(row)], logical_y(code, j), qubits=output)


def build_injection_circuits(code, kind, input_state='X'):
    """
    Teleportation circuits injecting S̄ or √X̄ on every logical qubit

    Args:
        code: CSD code
        kind: 's_teleport', 'knill_s' or 'sqrtx_teleport'
        input_state: 'Z', 'X' or a list of stabilizers of the input block

    Returns:
        Circuit whose output block is qubits 0..n-1

    Raises:
        ValueError: for an unknown kind
        ProtocolError: for sqrtx_teleport when ⊗H is not H̄ up to a logical SWAP
    """
    n, k = code.n, code.n_logicals
    out = list(range(n))
    data = list(range(n, 2 * n))
    circuit = Circuit(2 * n)
    ys = [logical_y(code, j) for j in range(k)]

    with circuit.noiseless_region():
        _prepare(circuit, code, data, input_state)

    if kind == 's_teleport':
        with circuit.noiseless_region():
            _prepare(circuit, code, out, list(code.checks) + ys)
        _s_teleport(circuit, code, out, data)
    elif kind == 'sqrtx_teleport':
        transversal_h = CliffordCircuit(n, [('H', q) for q in range(n)])
        if not is_hadamard_swap_form(logical_action(transversal_h, code)):
            raise ProtocolError(f"⊗H on {code.parameters()} is not H̄ up to a logical SWAP")
        with circuit.noiseless_region():
            _prepare(circuit, code, out, list(code.checks) + ys)
        circuit.gate('H', *data)
        circuit.tick()
        _s_teleport(circuit, code, out, data)
        circuit.gate('H', *out)
        circuit.tick()
    elif kind == 'knill_s':
        ancilla = list(range(2 * n, 3 * n))
        pair = [c.embedded(2 * n, range(n)) for c in code.checks] + \
               [c.embedded(2 * n, range(n, 2 * n)) for c in code.checks]
        for j in range(k):
            x = code.logical_x[j].embedded(2 * n, range(n)) * ys[j].embedded(2 * n, range(n, 2 * n))
            z = code.logical_z[j].embedded(2 * n, range(n)) * code.logical_z[j].embedded(2 * n, range(n, 2 * n))
            pair.extend([x, z])
        with circuit.noiseless_region():
            _prepare(circuit, code, ancilla + out, pair)
        _transversal_cx(circuit, data, ancilla)
        data_records = [circuit.measure(q, 'X') for q in data]
        ancilla_records = [circuit.measure(q, 'Z') for q in ancilla]
        circuit.tick()
        _parity_detectors(circuit, code.hx.to_array(), data_records)
        _parity_detectors(circuit, code.hz.to_array(), ancilla_records)
        for j in range(k):
            xs = code.logical_x_matrix().to_array()[j]
            zs = code.logical_z_matrix().to_array()[j]
            circuit.feedback([data_records[q] for q in np.flatnonzero(xs)], code.logical_z[j], qubits=out)
            circuit.feedback([ancilla_records[q] for q in np.flatnonzero(zs)], ys[j], qubits=out)
    else:
        raise ValueError(f"Unknown injection kind '{kind}', expected one of {INJECTION_KINDS}")
    logger.debug(f"Built {kind} injection on {code.parameters()}: {len(circuit)} instructions")
    return circuit
