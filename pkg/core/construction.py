"""
###############################################################################
# Construction - Seed library, symplectic double, C4 concatenation
###############################################################################
# Pipeline: seed non-CSS code C  →  symplectic double D(C) with duality τ
#           →  C4 ⊗_τ D(C), a self-dual CSS code on 4n qubits.
###############################################################################
"""

import logging

import numpy as np

from .codes import ConcatLayout, CssCode, StabilizerCode, ZXDuality, compute_logicals
from .exceptions import InvalidDualityError, UnknownSeedError
from .f2 import BitMatrix, BitVector
from .pauli import PauliOperator

logger = logging.getLogger(__name__)


###############################################################################
# Seed library
###############################################################################

SEED_MATRICES = {
    'c422': ['1001|0110',
             '0110|1001'],
    'c513': ['10010|01100',
             '01001|00110',
             '10100|00011',
             '01010|10001'],
    'c833': ['11111111|00000000',
             '00000000|11111111',
             '01011010|00001111',
             '01010101|00110011',
             '01101001|01010101'],
    'c1244': ['100101010100|010101011101',
              '010101010001|001100001010',
              '001100000101|101010010111',
              '000011000101|010110010111',
              '000000110000|110011001100',
              '000000001100|111100000011',
              '000000000011|001111001111',
              '000000000000|000000111111'],
}

SEED_NAMES = {
    'c422': '[[4,2,2]]',
    'c513': '[[5,1,3]]',
    'c833': '[[8,3,3]]',
    'c1244': '[[12,4,4]]',
}

# Declared basis for the [[4,2,2]] seed, ordered X̄1, Z̄1, X̄2, Z̄2
C422_LOGICALS = ('IZZI', 'ZIXI', 'ZIIZ', 'IZIX')

# C4 logical patterns per slot, qubit order inside a block
C4_X = {1: (1, 1, 0, 0), 2: (1, 0, 1, 0)}
C4_Z = {1: (1, 0, 1, 0), 2: (1, 1, 0, 0)}
C4_LOGICALS = ('XXII', 'ZIZI', 'XIXI', 'ZZII')


def seed_library(name):
    """
    Load one of the printed seed non-CSS codes

    Args:
        name: 'c422', 'c513', 'c833' or 'c1244'

    Returns:
        StabilizerCode with the printed parity-check matrix and a logical basis

    Example:
        seed = seed_library('c422')   # checks XZZX, ZXXZ
    """
    if name not in SEED_MATRICES:
        raise UnknownSeedError(f"Unknown seed '{name}'. Available: {sorted(SEED_MATRICES)}")
    rows = SEED_MATRICES[name]
    n = len(rows[0].split('|')[0])
    checks = [PauliOperator.from_symplectic(BitVector.from_string(row.replace('|', ''))) for row in rows]
    code = StabilizerCode(n, checks, name=SEED_NAMES[name])
    if name == 'c422':
        lx1, lz1, lx2, lz2 = (PauliOperator.from_string(s) for s in C422_LOGICALS)
        code = code.with_logicals([lx1, lx2], [lz1, lz2])
    return compute_logicals(code)


def c4_code():
    """The [[4,2,2]] Iceberg code with its fixed logical convention"""
    hx = BitMatrix.from_rows(['1111'])
    hz = BitMatrix.from_rows(['1111'])
    lx1, lz1, lx2, lz2 = (PauliOperator.from_string(s) for s in C4_LOGICALS)
    return CssCode(4, hx, hz, [lx1, lx2], [lz1, lz2], name='C4')


###############################################################################
# Symplectic double
###############################################################################

def symplectic_double(code):
    """
    Symplectic double D(C) of a stabilizer code

    hx = (H_X | H_Z) and hz = (H_Z | H_X) on 2n qubits. The logical basis is the
    lift of C's basis: for a seed logical L = (a|b) the double has the X-type
    operator (a|b) and the Z-type operator (b|a). Pairs are ordered
    (X(X̄_m), Z(Z̄_m)) for m < k, then (X(Z̄_m), Z(X̄_m)).

    Args:
        code: StabilizerCode (logicals computed when missing)

    Returns:
        tuple: (CssCode on 2n qubits, ZXDuality pairing i with i+n)
    """
    if not code.has_logicals():
        code = compute_logicals(code)
    n = code.n
    checks = code.check_matrix().to_array()
    h_x, h_z = checks[:, :n], checks[:, n:]
    hx = BitMatrix.from_array(np.hstack([h_x, h_z]), 2 * n)
    hz = BitMatrix.from_array(np.hstack([h_z, h_x]), 2 * n)

    def lift_x(p):
        return PauliOperator.x_type(np.concatenate([p.x.to_array(), p.z.to_array()]))

    def lift_z(p):
        return PauliOperator.z_type(np.concatenate([p.z.to_array(), p.x.to_array()]))

    logical_x = [lift_x(p) for p in code.logical_x] + [lift_x(p) for p in code.logical_z]
    logical_z = [lift_z(p) for p in code.logical_z] + [lift_z(p) for p in code.logical_x]

    seed_label = code.name or f"[[{n},{code.k}]]"
    double = CssCode(2 * n, hx, hz, logical_x, logical_z, name=f"D({seed_label})")
    logger.debug(f"Doubled {seed_label} into {double.parameters()}")
    return double, ZXDuality.standard(2 * n)


###############################################################################
# C4 concatenation
###############################################################################

def concat_layout(tau):
    """Block assignment: orbit (i, τ(i)) with i < τ(i) goes to block b in order of i"""
    blocks, pair_map = [], {}
    for b, (i, j) in enumerate(tau.orbits()):
        blocks.append(tuple(range(4 * b, 4 * b + 4)))
        pair_map[i] = (b, 1)
        pair_map[j] = (b, 2)
    return blocks, pair_map


def _map_through_c4(bits, pair_map, n_blocks, patterns):
    out = np.zeros(4 * n_blocks, dtype=bool)
    for q in np.flatnonzero(np.asarray(bits, dtype=bool)):
        block, slot = pair_map[int(q)]
        out[4 * block:4 * block + 4] ^= np.array(patterns[slot], dtype=bool)
    return out


def map_x_through_c4(bits, layout):
    """Rewrite an outer X-type support as physical X support"""
    return _map_through_c4(bits, layout.pair_map, layout.n_blocks, C4_X)


def map_z_through_c4(bits, layout):
    return _map_through_c4(bits, layout.pair_map, layout.n_blocks, C4_Z)


def concatenate_c4(double, tau):
    """
    Concatenate a CSS code with C4 along a ZX-duality

    Args:
        double: CssCode (typically a symplectic double)
        tau: ZXDuality on double.n qubits

    Returns:
        tuple: (CssCode on 2·double.n qubits, ConcatLayout). Rows of hx/hz are
               the per-block C4 checks first, then the rewritten outer checks.

    Raises:
        InvalidDualityError: if tau does not act on double.n qubits
    """
    if not isinstance(tau, ZXDuality):
        tau = ZXDuality(tau)
    if tau.n != double.n:
        raise InvalidDualityError(f"Duality acts on {tau.n} qubits but code has {double.n}")

    blocks, pair_map = concat_layout(tau)
    n_blocks = len(blocks)
    layout = ConcatLayout(blocks, pair_map, n_concat_x=double.hx.rows, n_concat_z=double.hz.rows)

    c4_rows = np.zeros((n_blocks, 4 * n_blocks), dtype=bool)
    for b in range(n_blocks):
        c4_rows[b, 4 * b:4 * b + 4] = True

    x_rows = [map_x_through_c4(row, layout) for row in double.hx.to_array()]
    z_rows = [map_z_through_c4(row, layout) for row in double.hz.to_array()]
    n_phys = 4 * n_blocks
    hx = BitMatrix.from_array(np.vstack([c4_rows] + x_rows) if x_rows else c4_rows, n_phys)
    hz = BitMatrix.from_array(np.vstack([c4_rows] + z_rows) if z_rows else c4_rows, n_phys)

    logical_x = [PauliOperator.x_type(map_x_through_c4(p.x.to_array(), layout)) for p in double.logical_x]
    logical_z = [PauliOperator.z_type(map_z_through_c4(p.z.to_array(), layout)) for p in double.logical_z]

    label = double.name or f"[[{double.n},{double.k}]]"
    code = CssCode(n_phys, hx, hz, logical_x, logical_z, name=f"C4⊗{label}")
    logger.debug(f"Concatenated {label} with C4: n={n_phys}, blocks={n_blocks}")
    return code, layout


###############################################################################
# Hadamard transform
###############################################################################

def hadamard_transform(code, pattern):
    """
    Swap X and Z components on flagged qubits

    Args:
        code: StabilizerCode or CssCode
        pattern: Sequence of 0/1 of length code.n

    Returns:
        StabilizerCode with the same parameters (logicals transformed alike)

    Example:
        hadamard_transform(c4_code(), [0, 1, 1, 0])   # checks XZZX, ZXXZ
    """
    flags = np.asarray(pattern, dtype=bool)
    if flags.shape != (code.n,):
        raise ValueError(f"Pattern length {flags.size} does not match n={code.n}")

    def swap(p):
        x, z = p.x.to_array(), p.z.to_array()
        new_x = np.where(flags, z, x)
        new_z = np.where(flags, x, z)
        return PauliOperator(BitVector.from_bits(new_x), BitVector.from_bits(new_z))

    return StabilizerCode(code.n, [swap(c) for c in code.checks],
                          [swap(p) for p in code.logical_x], [swap(p) for p in code.logical_z],
                          name=f"H({code.name})" if code.name else None)


def c4_block_pattern(n_blocks):
    """Per-block pattern 0110 that turns each C4 block into the [[4,2,2]] seed structure"""
    return [0, 1, 1, 0] * n_blocks


###############################################################################
# One-call pipeline
###############################################################################

class CsdConstruction:
    ###############################################################################
    # CsdConstruction - Everything produced when building a CSD code
    ###############################################################################

    def __init__(self, seed, double, tau, csd, layout):
        self.seed = seed
        self.double = double
        self.tau = tau
        self.csd = csd
        self.layout = layout

    @property
    def name(self):
        return self.csd.name

    def __repr__(self):
        return (f"CsdConstruction(seed={self.seed.parameters()}, double={self.double.parameters()}, "
                f"csd={self.csd.parameters()})")


def build_csd(seed):
    """
    Seed → double → C4 concatenation

    Args:
        seed: Seed name ('c422', ...) or a StabilizerCode

    Returns:
        CsdConstruction
    """
    seed_code = seed_library(seed) if isinstance(seed, str) else compute_logicals(seed)
    double, tau = symplectic_double(seed_code)
    csd, layout = concatenate_c4(double, tau)
    logger.info(f"Built {csd.parameters()} CSD code from seed {seed_code.parameters()}")
    return CsdConstruction(seed_code, double, tau, csd, layout)


def many_hypercube(level_two=None, pattern=None):
    """
    Next many-hypercube level: Hadamard-transform a CSD code and rebuild

    Args:
        level_two: CsdConstruction to lift (default: the [[16,4,4]] code)
        pattern: Hadamard pattern (default: 0110 on every block)

    Returns:
        CsdConstruction of the [[64,8]] code when starting from [[16,4,4]]
    """
    base = level_two or build_csd('c422')
    pattern = pattern if pattern is not None else c4_block_pattern(base.layout.n_blocks)
    return build_csd(hadamard_transform(base.csd, pattern))
