"""
###############################################################################
# Gates - Logical actions, fold-pair lifting and SWAP-transversal gates
###############################################################################
# Everything here is phase-free: a logical gate is identified with the
# symplectic matrix of its action on the code's logical basis.
#
# Lifting from a seed C to its double D(C):
#     single-qubit Clifford on i  →  word in SWAP, CX(i,τi), CX(τi,i)
#     SWAP(i, j)                  →  SWAP(i, j) SWAP(τi, τj)
# Rewriting from D(C) to the CSD code (qubits of block b are 4b..4b+3):
#     SWAP(i, τi)                 →  SWAP(4b+1, 4b+2)
#     CX(slot 1 → slot 2)         →  SWAP(4b+1, 4b+3)
#     CX(slot 2 → slot 1)         →  SWAP(4b+2, 4b+3)
#     CZ(i, τi)                   →  S† S S S† on the block
#     H on every qubit            →  H on every qubit (block SWAP undone)
#     lifted SWAP pair            →  swap of whole blocks
###############################################################################
"""

import itertools
import logging
from collections import deque

import numpy as np

from .circuit import CliffordCircuit
from .codes import ZXDuality, compute_logicals
from .construction import C4_X, C4_Z, build_csd
from .exceptions import BudgetExceededError, MissingRealizationError, NotALogicalGateError
from .pauli import SymplecticMatrix, is_symplectic, lambda_form

logger = logging.getLogger(__name__)

TRANSVERSALITIES = ('transversal', 'swap-transversal', 'fold-transversal', 'injected')

# Representatives of the six phase-free single-qubit Clifford classes
SP2_WORDS = ('', 'H', 'S', 'H S', 'S H', 'H S H')

# Largest seed handled by the automorphism brute force
MAX_BRUTE_FORCE_QUBITS = 6

# Elementary seed gates on the fold pair; 0 stands for qubit i and 1 for τ(i)
SEED_GATE_LIFTS = {
    'I': (), 'X': (), 'Y': (), 'Z': (),
    'H': (('SWAP', 0, 1),),
    'S': (('CX', 0, 1),),
    'S_DAG': (('CX', 0, 1),),
    'SQRT_X': (('CX', 1, 0),),
    'SQRT_X_DAG': (('CX', 1, 0),),
}

# Fold-pair generators in tie-break order for the GL2 table
_PAIR_GENERATORS = (('SWAP', 0, 1), ('CX', 0, 1), ('CX', 1, 0))


class LogicalAction:
    ###############################################################################
    # LogicalAction - Phase-free action of a logical gate on 2t logical coordinates
    ###############################################################################

    __slots__ = ('matrix',)

    def __init__(self, matrix):
        """
        Initialize LogicalAction

        Args:
            matrix: SymplecticMatrix (or 0/1 array) in the row-vector convention

        Raises:
            ValueError: if the matrix is not symplectic
        """
        if not isinstance(matrix, SymplecticMatrix):
            matrix = SymplecticMatrix.from_array(matrix)
        if not is_symplectic(matrix):
            raise ValueError(f"Logical action is not symplectic: {matrix.to_strings()}")
        self.matrix = matrix

    @classmethod
    def identity(cls, t):
        return cls(SymplecticMatrix.identity(t))

    @classmethod
    def from_key(cls, t, key):
        return cls(SymplecticMatrix.from_key(t, key))

    @property
    def t(self):
        return self.matrix.t

    def compose(self, other):
        """self then other"""
        return LogicalAction(self.matrix @ other.matrix)

    __matmul__ = compose

    def inverse(self):
        return LogicalAction(self.matrix.inverse())

    def key(self):
        return self.matrix.key()

    def blocks(self):
        return self.matrix.blocks()

    def is_identity(self):
        return self.matrix.is_identity()

    def shape(self):
        """
        Block shape of the matrix [[A, B], [C, D]]

        Returns:
            str: 'identity', 'block-diagonal', 'block-anti-diagonal',
                 'unitriangular' (A = D = I, C = 0) or 'general'
        """
        a, b, c, d = self.blocks()
        eye = np.eye(self.t, dtype=bool)
        if self.is_identity():
            return 'identity'
        if not b.any() and not c.any():
            return 'block-diagonal'
        if not a.any() and not d.any():
            return 'block-anti-diagonal'
        if not c.any() and (a == eye).all() and (d == eye).all():
            return 'unitriangular'
        return 'general'

    def phase_block_valid(self):
        """For unitriangular actions: the off-diagonal block is symmetric with zero diagonal"""
        _, b, _, _ = self.blocks()
        return bool((b == b.T).all() and not np.diag(b).any())

    def to_strings(self):
        return self.matrix.to_strings()

    def __eq__(self, other):
        return isinstance(other, LogicalAction) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"LogicalAction(Sp{2 * self.t}, {self.shape()})"


class GateRecord:
    ###############################################################################
    # GateRecord - A physical circuit bound to its logical action on a code
    ###############################################################################

    def __init__(self, label, circuit, action, transversality):
        if transversality not in TRANSVERSALITIES:
            raise ValueError(f"Unknown transversality '{transversality}'. Use one of {TRANSVERSALITIES}")
        self.label = label
        self.circuit = circuit
        self.action = action
        self.transversality = transversality

    def verify(self, code):
        """True iff the circuit still realizes the stored action on code"""
        return logical_action(self.circuit, code) == self.action

    def to_dict(self):
        return {
            'label': self.label,
            'word': self.circuit.to_word() if self.circuit is not None else None,
            'matrix': self.action.to_strings(),
            'shape': self.action.shape(),
            'transversality': self.transversality,
        }

    def __repr__(self):
        return f"GateRecord('{self.label}', {self.transversality}, {self.action.shape()})"


###############################################################################
# Logical action
###############################################################################

def logical_action(circuit, code):
    """
    Logical action of a Clifford circuit on a stabilizer code

    Each logical is conjugated through the circuit and expanded in the logical
    basis: the coefficient on X̄_j is the symplectic product with Z̄_j and the
    coefficient on Z̄_j the product with X̄_j. The remainder must lie in the
    stabilizer group.

    Args:
        circuit: CliffordCircuit on code.n qubits
        code: StabilizerCode or CssCode

    Returns:
        LogicalAction on code.k logical qubits

    Raises:
        NotALogicalGateError: if the circuit does not normalize the stabilizer group
    """
    if circuit.n != code.n:
        raise ValueError(f"Circuit acts on {circuit.n} qubits but code has n={code.n}")
    if not code.has_logicals():
        code = compute_logicals(code)
    if code.k == 0:
        raise ValueError("Code encodes no logical qubits")

    n, k = code.n, code.n_logicals
    m = circuit.symplectic_matrix().to_array().astype(np.uint8)
    lam = lambda_form(n).to_array().astype(np.uint8)
    checks = code.check_matrix().to_array().astype(np.uint8)
    logicals = code.logical_matrix().to_array().astype(np.uint8)
    # Stabilizer group = vectors commuting with the whole normalizer span(checks, logicals)
    pairing = (lam @ np.vstack([checks, logicals]).T) & 1

    if checks.shape[0]:
        check_images = (checks @ m) & 1
        bad = np.flatnonzero(((check_images @ pairing) & 1).any(axis=1))
        if bad.size:
            raise NotALogicalGateError(f"Check {int(bad[0])} is mapped outside the stabilizer group")

    images = (logicals @ m) & 1
    products = (images @ lam @ logicals.T) & 1
    coefficients = np.hstack([products[:, k:], products[:, :k]])
    residual = (images + coefficients @ logicals) & 1
    bad = np.flatnonzero(((residual @ pairing) & 1).any(axis=1))
    if bad.size:
        raise NotALogicalGateError(f"Logical {int(bad[0])} is not mapped to a logical operator")
    return LogicalAction(SymplecticMatrix.from_array(coefficients.astype(bool)))


###############################################################################
# Lifting seed gates to the double
###############################################################################

def _pair_matrix(word):
    matrix = np.eye(2, dtype=np.uint8)
    for name, a, b in word:
        circuit = CliffordCircuit(2, [(name, a, b)])
        x_block = circuit.symplectic_matrix().to_array()[:2, :2].astype(np.uint8)
        matrix = (matrix @ x_block) & 1
    return matrix


def _pair_table():
    """Shortest fold-pair word for each element of GL2(F2), by BFS"""
    start = np.eye(2, dtype=np.uint8)
    table = {start.tobytes(): ()}
    queue = deque([((), start)])
    while queue:
        word, matrix = queue.popleft()
        for gen in _PAIR_GENERATORS:
            image = (matrix @ _pair_matrix([gen])) & 1
            if image.tobytes() not in table:
                table[image.tobytes()] = word + (gen,)
                queue.append((word + (gen,), image))
    return table


_PAIR_TABLE = _pair_table()


def single_qubit_matrix(word):
    """2x2 symplectic matrix (rows: image of X, image of Z) of a single-qubit word such as 'H S'"""
    circuit = CliffordCircuit(1)
    for token in word.split():
        circuit.append(token, 0)
    return circuit.symplectic_matrix().to_array().astype(np.uint8)


def lift_single_qubit(g, i, tau):
    """
    Lift a single-qubit Clifford on seed qubit i to the fold pair {i, τ(i)}

    Args:
        g: Gate name or space-separated word ('H', 'S H'), or a 2x2 0/1
           symplectic matrix
        i: Seed qubit index
        tau: ZXDuality of the double

    Returns:
        CliffordCircuit on tau.n qubits. Words lift gate by gate; a matrix
        lifts to the shortest word with the same X-block action.

    Example:
        lift_single_qubit('H', 0, ZXDuality.standard(8))   # SWAP(0, 4)
    """
    j = tau.partner(i)
    pair = (i, j)
    circuit = CliffordCircuit(tau.n)
    if isinstance(g, str):
        for token in g.split():
            name = token.upper().replace('SDG', 'S_DAG')
            if name not in SEED_GATE_LIFTS:
                raise MissingRealizationError(f"Seed gate '{token}' has no fold-pair lift")
            for gate, a, b in SEED_GATE_LIFTS[name]:
                circuit.append(gate, pair[a], pair[b])
        return circuit
    matrix = np.asarray(g, dtype=np.uint8) & 1
    if matrix.shape != (2, 2) or matrix.tobytes() not in _PAIR_TABLE:
        raise ValueError(f"Not an element of Sp2(F2): {matrix.tolist()}")
    for gate, a, b in _PAIR_TABLE[matrix.tobytes()]:
        circuit.append(gate, pair[a], pair[b])
    return circuit


def lift_swap(i, j, tau):
    """SWAP(i, j) on the seed lifts to SWAP(i, j) SWAP(τi, τj) on the double"""
    if i == j:
        raise ValueError(f"Cannot lift SWAP of qubit {i} with itself")
    return CliffordCircuit(tau.n, [('SWAP', i, j), ('SWAP', tau.partner(i), tau.partner(j))])


def lift_circuit(seed_circuit, tau):
    """
    Lift a seed circuit of single-qubit gates and SWAPs gate by gate

    Raises:
        MissingRealizationError: for two-qubit gates other than SWAP
    """
    lifted = CliffordCircuit(tau.n)
    for name, *qubits in seed_circuit.ops:
        if name == 'SWAP':
            lifted.extend(lift_swap(qubits[0], qubits[1], tau))
        elif len(qubits) == 1:
            lifted.extend(lift_single_qubit(name, qubits[0], tau))
        else:
            raise MissingRealizationError(f"No fold-transversal lift for {name}{tuple(qubits)}")
    return lifted


###############################################################################
# Fold-transversal gates
###############################################################################

def h_tau(code, tau=None, layout=None):
    """
    Hadamard-type gate H_τ

    Args:
        code: The double D(C), or the CSD code when layout is given
        tau: ZXDuality of the double (default: standard pairing)
        layout: ConcatLayout of the CSD code

    Returns:
        GateRecord. On the double the circuit is H on every qubit followed by
        SWAP across each orbit; on the CSD code it is H on every qubit.
    """
    if layout is not None:
        circuit = CliffordCircuit(code.n, [('H', q) for q in range(code.n)])
        return GateRecord('H_tau', circuit, logical_action(circuit, code), 'transversal')
    tau = tau or ZXDuality.standard(code.n)
    circuit = CliffordCircuit(code.n, [('H', q) for q in range(code.n)])
    for i, j in tau.orbits():
        circuit.append('SWAP', i, j)
    return GateRecord('H_tau', circuit, logical_action(circuit, code), 'fold-transversal')


def s_tau(code, tau=None, layout=None):
    """
    Phase-type gate S_τ: CZ across every orbit, or S† S S S† per C4 block

    Args:
        code: The double D(C), or the CSD code when layout is given
        tau: ZXDuality of the double (default: standard pairing)
        layout: ConcatLayout of the CSD code

    Returns:
        GateRecord whose action is unitriangular with a symmetric,
        zero-diagonal phase block
    """
    if layout is not None:
        circuit = CliffordCircuit(code.n)
        for block in layout.blocks:
            for gate, q in zip(('S_DAG', 'S', 'S', 'S_DAG'), block):
                circuit.append(gate, q)
        return GateRecord('S_tau', circuit, logical_action(circuit, code), 'transversal')
    tau = tau or ZXDuality.standard(code.n)
    circuit = CliffordCircuit(code.n, [('CZ', i, j) for i, j in tau.orbits()])
    return GateRecord('S_tau', circuit, logical_action(circuit, code), 'fold-transversal')


def is_hadamard_swap_form(action):
    """
    True iff the action is H on every logical qubit composed with a logical
    SWAP pairing, i.e. [[0, P], [P, 0]] with P an involutive permutation
    """
    a, b, c, d = action.blocks()
    if a.any() or d.any() or not (b == c).all():
        return False
    if not ((b.sum(axis=0) == 1).all() and (b.sum(axis=1) == 1).all()):
        return False
    p = b.astype(np.uint8)
    return bool((((p @ p) & 1) == np.eye(action.t, dtype=np.uint8)).all())


###############################################################################
# Automorphism brute force
###############################################################################

def swap_network(perm):
    """
    SWAP word moving the content of qubit q to qubit perm[q]

    Returns:
        list of (a, b) pairs, applied left to right
    """
    n = len(perm)
    position = list(range(n))   # position[content]
    content = list(range(n))    # content[position]
    inverse = [0] * n
    for q, target in enumerate(perm):
        inverse[target] = q
    swaps = []
    for dest in range(n):
        src = position[inverse[dest]]
        if src != dest:
            swaps.append((dest, src))
            moved = content[dest]
            content[dest], content[src] = content[src], moved
            position[content[dest]] = dest
            position[moved] = src
    return swaps


def automorphism_circuit(n, perm, words):
    """Per-qubit words from SP2_WORDS followed by the relabeling q → perm[q]"""
    circuit = CliffordCircuit(n)
    for q, word in enumerate(words):
        for token in word.split():
            circuit.append(token, q)
    for a, b in swap_network(perm):
        circuit.append('SWAP', a, b)
    return circuit


def _choice_masks(checks, targets, perm, sp2):
    """
    masks[q, c] packs the bits ⟨g_c(s_q), t_perm(q)⟩ over every (check, target)
    pair into one integer; a choice vector is valid iff the XOR over q is 0.
    """
    n = len(perm)
    n_checks, n_targets = checks.shape[0], targets.shape[0]
    if n_checks * n_targets > 64:
        raise BudgetExceededError(f"{n_checks} checks x {n_targets} targets do not fit one 64-bit mask")
    weights = (np.uint64(1) << np.arange(n_checks * n_targets, dtype=np.uint64)).reshape(n_checks, n_targets)
    masks = np.zeros((n, len(sp2)), dtype=np.uint64)
    for q in range(n):
        local = np.stack([checks[:, q], checks[:, n + q]], axis=1)
        dest = perm[q]
        t_local = np.stack([targets[:, dest], targets[:, n + dest]], axis=1)
        for c, g in enumerate(sp2):
            image = (local @ g) & 1
            bits = ((image[:, :1] * t_local[:, 1][None, :]) + (image[:, 1:] * t_local[:, 0][None, :])) & 1
            masks[q, c] = np.bitwise_xor.reduce((bits.astype(np.uint64) * weights).ravel()) \
                if bits.size else np.uint64(0)
    return masks


def find_swap_transversal_gates(code, budget=MAX_BRUTE_FORCE_QUBITS, dedupe=True):
    """
    All gates made of single-qubit Cliffords followed by a qubit relabeling

    Every permutation π is tried; for each, all 6^n per-qubit Clifford
    classes are tested at once by XOR-broadcasting packed commutation bits.

    Args:
        code: StabilizerCode with n ≤ budget
        budget: Largest n searched (capped at 6)
        dedupe: Keep one circuit per logical action

    Returns:
        list of GateRecord (swap-transversal, or transversal when π is trivial)

    Raises:
        BudgetExceededError: if code.n exceeds the budget
    """
    n = code.n
    if n > min(budget, MAX_BRUTE_FORCE_QUBITS):
        raise BudgetExceededError(f"Brute force limited to n ≤ {min(budget, MAX_BRUTE_FORCE_QUBITS)}, got n={n}")
    if not code.has_logicals():
        code = compute_logicals(code)

    checks = code.check_matrix().to_array().astype(np.uint8)
    logicals = code.logical_matrix().to_array().astype(np.uint8)
    targets = np.vstack([checks, logicals])
    sp2 = [single_qubit_matrix(word) for word in SP2_WORDS]

    records, seen = [], set()
    n_candidates = 0
    for perm in itertools.permutations(range(n)):
        masks = _choice_masks(checks, targets, perm, sp2)
        total = masks[0]
        for q in range(1, n):
            total = np.bitwise_xor.outer(total, masks[q])
        valid = np.argwhere(total == 0)
        for choice in valid:
            words = [SP2_WORDS[int(c)] for c in np.atleast_1d(choice)]
            circuit = automorphism_circuit(n, list(perm), words)
            action = logical_action(circuit, code)
            n_candidates += 1
            if dedupe:
                if action.key() in seen:
                    continue
                seen.add(action.key())
            identity_perm = list(perm) == list(range(n))
            label = circuit.to_word() or 'I'
            records.append(GateRecord(label, circuit, action,
                                      'transversal' if identity_perm else 'swap-transversal'))
    logger.info(f"Automorphism search on {code.name or code.parameters()}: "
                f"{n_candidates} circuits, {len(records)} kept")
    return records


###############################################################################
# Rewriting double circuits on the CSD code
###############################################################################

def _slot_qubits(block, slot):
    return 4 * block + slot


def csd_word(circuit, layout):
    """
    Rewrite a fold-transversal circuit on D(C) as a SWAP-transversal word on the CSD code

    Args:
        circuit: CliffordCircuit on the double
        layout: ConcatLayout of the CSD code

    Returns:
        CliffordCircuit on layout.n_physical qubits with the same logical action

    Raises:
        MissingRealizationError: for gates without a SWAP-transversal rewrite
    """
    pair_map = layout.pair_map
    n_outer = len(pair_map)
    if circuit.n != n_outer:
        raise ValueError(f"Circuit acts on {circuit.n} qubits but layout holds {n_outer} outer qubits")
    out = CliffordCircuit(layout.n_physical)
    # A pending logical SWAP of the two slots, emitted lazily
    pending = [False] * layout.n_blocks

    def flush(block):
        if pending[block]:
            out.append('SWAP', _slot_qubits(block, 1), _slot_qubits(block, 2))
            pending[block] = False

    ops = circuit.ops
    idx = 0
    while idx < len(ops):
        name, *qubits = ops[idx]
        if name == 'H':
            run = idx
            while run < len(ops) and ops[run][0] == 'H':
                run += 1
            covered = {op[1] for op in ops[idx:run]}
            if covered != set(range(n_outer)) or run - idx != n_outer:
                raise MissingRealizationError("H must act on every qubit of the double at once")
            for q in range(layout.n_physical):
                out.append('H', q)
            # ⊗H on a C4 block also swaps its two logical qubits
            for block in range(layout.n_blocks):
                pending[block] = not pending[block]
            idx = run
            continue

        if name in ('I', 'X', 'Y', 'Z'):
            block, slot = pair_map[qubits[0]]
            flush(block)
            if name in ('X', 'Y'):
                for offset in np.flatnonzero(C4_X[slot]):
                    out.append('X', 4 * block + int(offset))
            if name in ('Z', 'Y'):
                for offset in np.flatnonzero(C4_Z[slot]):
                    out.append('Z', 4 * block + int(offset))
            idx += 1
            continue

        if len(qubits) != 2:
            raise MissingRealizationError(f"{name}{tuple(qubits)} has no SWAP-transversal rewrite")

        (b1, s1), (b2, s2) = pair_map[qubits[0]], pair_map[qubits[1]]
        if b1 == b2:
            if name == 'SWAP':
                pending[b1] = not pending[b1]
            elif name == 'CX':
                flush(b1)
                out.append('SWAP', _slot_qubits(b1, s1), _slot_qubits(b1, 3))
            elif name == 'CZ':
                flush(b1)
                for gate, q in zip(('S_DAG', 'S', 'S', 'S_DAG'), layout.blocks[b1]):
                    out.append(gate, q)
            else:
                raise MissingRealizationError(f"{name} inside a block has no SWAP-transversal rewrite")
            idx += 1
            continue

        if name != 'SWAP':
            raise MissingRealizationError(f"{name} across blocks has no SWAP-transversal rewrite")
        partners = {block_slot: q for q, block_slot in pair_map.items()}
        want = {partners[(b1, 3 - s1)], partners[(b2, 3 - s2)]}
        nxt = ops[idx + 1] if idx + 1 < len(ops) else None
        if nxt is None or nxt[0] != 'SWAP' or set(nxt[1:]) != want:
            raise MissingRealizationError(
                f"SWAP{tuple(qubits)} is not followed by its mirror across the duality")
        flush(b1)
        flush(b2)
        for a, b in zip(layout.blocks[b1], layout.blocks[b2]):
            out.append('SWAP', a, b)
        if s1 != s2:
            for block in (b1, b2):
                out.append('SWAP', _slot_qubits(block, 1), _slot_qubits(block, 2))
        idx += 2

    for block in range(layout.n_blocks):
        flush(block)
    return out


###############################################################################
# G_τ generators
###############################################################################

def lifted_gate_records(construction, seed_gates=None):
    """
    Lift seed automorphisms to the double and rewrite them on the CSD code

    Args:
        construction: CsdConstruction
        seed_gates: GateRecords on the seed (default: brute-force search,
                    one circuit per action on the double)

    Returns:
        list of (double GateRecord, CSD GateRecord) pairs
    """
    if seed_gates is None:
        seed_gates = find_swap_transversal_gates(construction.seed, dedupe=False)
    pairs, seen = [], set()
    for record in seed_gates:
        double_circuit = lift_circuit(record.circuit, construction.tau)
        double_action = logical_action(double_circuit, construction.double)
        if double_action.key() in seen:
            continue
        seen.add(double_action.key())
        physical = csd_word(double_circuit, construction.layout)
        pairs.append((
            GateRecord(f"D({record.label})", double_circuit, double_action, 'fold-transversal'),
            GateRecord(f"D({record.label})", physical, logical_action(physical, construction.csd),
                       'swap-transversal'),
        ))
    logger.debug(f"Lifted {len(pairs)} distinct seed gates")
    return pairs


def g_tau_records(construction, seed_gates=None):
    """GateRecords on the CSD code generating G_τ: lifted automorphisms, H_τ and S_τ"""
    records = [csd for _, csd in lifted_gate_records(construction, seed_gates)]
    records.append(h_tau(construction.csd, layout=construction.layout))
    records.append(s_tau(construction.csd, layout=construction.layout))
    return records


def g_tau_generators(construction, seed_gates=None):
    return [record.action for record in g_tau_records(construction, seed_gates)]


###############################################################################
# Reference rows for the [[4,2,2]] seed (1-based qubit words)
###############################################################################

_REFERENCE_GATES = (
    {
        'label': 'lifted H3 H4 SWAP(3,4)',
        'seed': 'H3 H4 SWAP(3,4)',
        'double': 'SWAP(3,7) SWAP(4,8) SWAP(3,4) SWAP(7,8)',
        'csd': 'SWAP(10,11) SWAP(14,15) SWAP(9,13) SWAP(10,14) SWAP(11,15) SWAP(12,16)',
    },
    {
        'label': 'lifted H on all',
        'seed': 'H1 H2 H3 H4',
        'double': 'SWAP(1,5) SWAP(2,6) SWAP(3,7) SWAP(4,8)',
        'csd': 'SWAP(2,3) SWAP(6,7) SWAP(10,11) SWAP(14,15)',
    },
    {
        'label': 'lifted H2 H4 SWAP(3,4) SWAP(2,4)',
        'seed': 'H2 H4 SWAP(3,4) SWAP(2,4)',
        'double': 'SWAP(2,6) SWAP(4,8) SWAP(3,4) SWAP(7,8) SWAP(2,4) SWAP(6,8)',
        'csd': 'SWAP(6,7) SWAP(14,15) SWAP(9,13) SWAP(10,14) SWAP(11,15) SWAP(12,16) '
               'SWAP(5,13) SWAP(6,14) SWAP(7,15) SWAP(8,16)',
    },
    {
        'label': 'lifted HS / S†H',
        'seed': 'H1 S1 S_DAG2 H2 S_DAG3 H3 H4 S4',
        'double': 'SWAP(1,5) CX(1,5) CX(2,6) SWAP(2,6) CX(3,7) SWAP(3,7) SWAP(4,8) CX(4,8)',
        'csd': 'SWAP(2,3) SWAP(2,4) SWAP(6,8) SWAP(6,7) SWAP(10,12) SWAP(10,11) SWAP(14,15) SWAP(14,16)',
    },
    {
        'label': 'H_tau',
        'seed': None,
        'double': ' '.join(f"H{i}" for i in range(1, 9)) + ' ' +
                  ' '.join(f"SWAP({i},{i + 4})" for i in range(1, 5)),
        'csd': ' '.join(f"H{i}" for i in range(1, 17)),
    },
    {
        'label': 'S_tau',
        'seed': None,
        'double': ' '.join(f"CZ({i},{i + 4})" for i in range(1, 5)),
        'csd': ' '.join(f"S_DAG{1 + 4 * i} S{2 + 4 * i} S{3 + 4 * i} S_DAG{4 + 4 * i}" for i in range(4)),
    },
    {
        'label': 'transversal S on the double',
        'seed': None,
        'double': ' '.join(f"S{i}" for i in range(1, 9)),
        'csd': None,
    },
    {
        'label': 'double automorphism SWAP(6,7) SWAP(3,5)',
        'seed': None,
        'double': 'SWAP(6,7) SWAP(3,5)',
        'csd': None,
    },
)


def reference_gate_rows():
    """
    SWAP-transversal reference gates of the [[4,2,2]] → [[8,4,2]] → [[16,4,4]] chain

    Returns:
        list of dicts with 'label' and 1-based words 'seed', 'double', 'csd'.
        Rows with csd=None are logical on the double only.
    """
    return [dict(row) for row in _REFERENCE_GATES]


def replay_reference_gates(construction=None):
    """
    Check every reference row: lifts reproduce the double word and the double
    and CSD words share one logical action

    Returns:
        list of dicts with the row label, the action shape and 'ok'
    """
    construction = construction or build_csd('c422')
    seed, double, csd = construction.seed, construction.double, construction.csd
    results = []
    for row in reference_gate_rows():
        double_circuit = CliffordCircuit.from_word(double.n, row['double'], one_based=True)
        double_action = logical_action(double_circuit, double)
        ok = True
        if row['seed'] is not None:
            seed_circuit = CliffordCircuit.from_word(seed.n, row['seed'], one_based=True)
            logical_action(seed_circuit, seed)
            ok &= lift_circuit(seed_circuit, construction.tau) == double_circuit
        if row['csd'] is not None:
            csd_circuit = CliffordCircuit.from_word(csd.n, row['csd'], one_based=True)
            ok &= logical_action(csd_circuit, csd) == double_action
            ok &= logical_action(csd_word(double_circuit, construction.layout), csd) == double_action
        results.append({'label': row['label'], 'shape': double_action.shape(), 'ok': bool(ok)})
    return results
