"""
###############################################################################
# Codes - Stabilizer and CSS code containers, logical bases and validation
###############################################################################
"""

import logging

import numpy as np

from .exceptions import CommutationError, FormatError, InvalidCodeError, InvalidDualityError
from .f2 import BitMatrix, BitVector, kernel, rref, reduce_vector
from .pauli import PauliOperator, lambda_form, symplectic_product

logger = logging.getLogger(__name__)


class StabilizerCode:
    ###############################################################################
    # StabilizerCode - Commuting checks plus a symplectic logical basis
    ###############################################################################

    def __init__(self, n, checks, logical_x=None, logical_z=None, name=None):
        """
        Initialize StabilizerCode

        Args:
            n: Number of physical qubits
            checks: List of PauliOperator stabilizer generators
            logical_x: List of logical X operators (None = not yet computed)
            logical_z: List of logical Z operators paired index-wise with logical_x
            name: Optional label, e.g. '[[4,2,2]]'
        """
        for check in checks:
            if check.n != n:
                raise ValueError(f"Check on {check.n} qubits in a code with n={n}")
        self.n = n
        self.checks = list(checks)
        self.logical_x = list(logical_x) if logical_x is not None else []
        self.logical_z = list(logical_z) if logical_z is not None else []
        self.name = name

    ###########################################################################
    # Matrices
    ###########################################################################

    def check_matrix(self):
        """m x 2n symplectic check matrix (x | z)"""
        return BitMatrix.from_vectors([c.symplectic() for c in self.checks], 2 * self.n)

    def logical_matrix(self):
        """2k x 2n matrix with rows X̄_1..X̄_k, Z̄_1..Z̄_k"""
        return BitMatrix.from_vectors([p.symplectic() for p in self.logical_x + self.logical_z], 2 * self.n)

    def rank(self):
        return self.check_matrix().rank()

    @property
    def k(self):
        return self.n - self.rank()

    @property
    def n_logicals(self):
        return len(self.logical_x)

    def has_logicals(self):
        return bool(self.logical_x) or self.k == 0

    def check_weights(self):
        return [c.weight() for c in self.checks]

    def is_css(self):
        return all(c.is_x_type() or c.is_z_type() for c in self.checks)

    def in_stabilizer_group(self, pauli):
        """True if the (unsigned) Pauli lies in the span of the checks"""
        return self.check_matrix().row_space_contains(pauli.symplectic())

    def with_logicals(self, logical_x, logical_z):
        return StabilizerCode(self.n, self.checks, logical_x, logical_z, self.name)

    def parameters(self):
        return f"[[{self.n},{self.k}]]"

    def __repr__(self):
        label = f"'{self.name}' " if self.name else ''
        return f"StabilizerCode({label}n={self.n}, m={len(self.checks)}, k={self.k})"


class CssCode(StabilizerCode):
    ###############################################################################
    # CssCode - Stabilizer code with pure-X rows (hx) and pure-Z rows (hz)
    ###############################################################################

    def __init__(self, n, hx, hz, logical_x=None, logical_z=None, name=None):
        """
        Initialize CssCode

        Args:
            n: Number of physical qubits
            hx: BitMatrix of X-type checks (rows x n)
            hz: BitMatrix of Z-type checks (rows x n)
            logical_x, logical_z: Logical basis (PauliOperators)
            name: Optional label
        """
        if hx.cols != n or hz.cols != n:
            raise ValueError(f"hx/hz must have {n} columns, got {hx.cols} and {hz.cols}")
        self.hx = hx
        self.hz = hz
        checks = [PauliOperator.x_type(row) for row in hx.row_vectors()] + \
                 [PauliOperator.z_type(row) for row in hz.row_vectors()]
        super().__init__(n, checks, logical_x, logical_z, name)

    def with_logicals(self, logical_x, logical_z):
        return CssCode(self.n, self.hx, self.hz, logical_x, logical_z, self.name)

    def is_self_dual(self):
        return self.hx == self.hz

    def css_orthogonal(self):
        """True iff hx · hzᵀ = 0"""
        if self.hx.rows == 0 or self.hz.rows == 0:
            return True
        return not (self.hx @ self.hz.transpose()).to_array().any()

    def logical_x_matrix(self):
        """X parts of the X-type logicals (rows x n)"""
        return BitMatrix.from_vectors([p.x for p in self.logical_x], self.n)

    def logical_z_matrix(self):
        return BitMatrix.from_vectors([p.z for p in self.logical_z], self.n)

    def __repr__(self):
        label = f"'{self.name}' " if self.name else ''
        return f"CssCode({label}n={self.n}, mx={self.hx.rows}, mz={self.hz.rows}, k={self.k})"


class ZXDuality:
    ###############################################################################
    # ZXDuality - Fixed-point-free involution exchanging the X and Z sectors
    ###############################################################################

    def __init__(self, perm):
        """
        Initialize ZXDuality

        Args:
            perm: List where perm[i] is the partner of qubit i

        Raises:
            InvalidDualityError: if perm is not a fixed-point-free involution
        """
        perm = [int(p) for p in perm]
        n = len(perm)
        for i, j in enumerate(perm):
            if not 0 <= j < n:
                raise InvalidDualityError(f"Partner {j} of qubit {i} is out of range")
            if j == i:
                raise InvalidDualityError(f"Qubit {i} is a fixed point")
            if perm[j] != i:
                raise InvalidDualityError(f"perm is not an involution at qubit {i}")
        self.perm = perm

    @classmethod
    def standard(cls, n_total):
        """Pairing {i, i + n_total/2}"""
        if n_total % 2:
            raise InvalidDualityError(f"Cannot pair an odd number of qubits ({n_total})")
        half = n_total // 2
        return cls([(i + half) % n_total for i in range(n_total)])

    @property
    def n(self):
        return len(self.perm)

    def partner(self, i):
        return self.perm[i]

    def orbits(self):
        """Sorted orbit pairs (i, τ(i)) with i < τ(i)"""
        return [(i, j) for i, j in enumerate(self.perm) if i < j]

    def __repr__(self):
        return f"ZXDuality(orbits={self.orbits()})"


class ConcatLayout:
    ###############################################################################
    # ConcatLayout - Placement of outer qubits into C4 blocks
    # Block b owns physical qubits 4b..4b+3; slot 1 holds i, slot 2 holds τ(i)
    ###############################################################################

    def __init__(self, blocks, pair_map, n_concat_x=0, n_concat_z=None):
        """
        Initialize ConcatLayout

        Args:
            blocks: List of (q0, q1, q2, q3) physical qubit tuples
            pair_map: Dict outer qubit -> (block index, slot 1 or 2)
            n_concat_x: Number of concatenated X-type rows after the C4 rows of hx
            n_concat_z: Same for hz (default: n_concat_x)
        """
        outer = sorted(pair_map)
        if outer != list(range(len(outer))):
            raise InvalidCodeError("Every outer qubit must appear exactly once in the layout")
        self.blocks = [tuple(b) for b in blocks]
        self.pair_map = dict(pair_map)
        self.n_concat_x = n_concat_x
        self.n_concat_z = n_concat_x if n_concat_z is None else n_concat_z

    def n_concat(self, basis):
        """Concatenated generator count of one type"""
        if basis not in ('X', 'Z'):
            raise ValueError(f"basis must be 'X' or 'Z', got '{basis}'")
        return self.n_concat_x if basis == 'X' else self.n_concat_z

    @property
    def n_blocks(self):
        return len(self.blocks)

    @property
    def n_physical(self):
        return 4 * len(self.blocks)

    def block_of(self, physical_qubit):
        return physical_qubit // 4

    def outer_pair(self, block):
        """(slot-1 outer qubit, slot-2 outer qubit) of a block"""
        slots = {slot: q for q, (b, slot) in self.pair_map.items() if b == block}
        return slots[1], slots[2]

    def c4_rows(self):
        """Row indices of the per-block C4 checks inside hx (and hz)"""
        return list(range(self.n_blocks))

    def concat_rows(self, basis='X'):
        return list(range(self.n_blocks, self.n_blocks + self.n_concat(basis)))

    def blocks_touched(self, bits):
        """Blocks on which a length-4n bit vector has support"""
        bits = np.asarray(bits, dtype=bool)
        return sorted({int(q) // 4 for q in np.flatnonzero(bits)})

    def __repr__(self):
        return f"ConcatLayout(blocks={self.n_blocks})"


###############################################################################
# Logical operators
###############################################################################

def _check_commutation(code):
    matrix = code.check_matrix()
    if matrix.rows == 0:
        return
    lam = lambda_form(code.n)
    gram = (matrix @ lam @ matrix.transpose()).to_array()
    bad = np.argwhere(np.triu(gram))
    if bad.size:
        i, j = bad[0]
        raise CommutationError(f"checks {i},{j} anticommute")


def _logicals_valid(code):
    k = code.k
    if len(code.logical_x) != k or len(code.logical_z) != k:
        return False
    for logical in code.logical_x + code.logical_z:
        if logical.n != code.n:
            return False
        if any(symplectic_product(logical, check) for check in code.checks):
            return False
    for i, lx in enumerate(code.logical_x):
        for j, lz in enumerate(code.logical_z):
            if symplectic_product(lx, lz) != (i == j):
                return False
        for j, other in enumerate(code.logical_x):
            if i != j and symplectic_product(lx, other):
                return False
    for i, lz in enumerate(code.logical_z):
        for j, other in enumerate(code.logical_z):
            if i != j and symplectic_product(lz, other):
                return False
    return True


def compute_logicals(code):
    """
    Fill in a symplectic logical basis by deterministic Gram–Schmidt

    Codes that already carry a valid basis are returned unchanged.

    Args:
        code: StabilizerCode or CssCode

    Returns:
        Code of the same type with logical_x / logical_z set

    Raises:
        CommutationError: if two checks anticommute
    """
    _check_commutation(code)
    if code.logical_x and _logicals_valid(code):
        return code
    if code.logical_x:
        logger.warning(f"Declared logicals of {code.name or 'code'} are invalid; recomputing")

    n = code.n
    checks = code.check_matrix()
    lam = lambda_form(n)
    normalizer = kernel(checks @ lam) if checks.rows else BitMatrix.identity(2 * n)

    # Complement of the stabilizer span inside the normalizer, in kernel row order
    span, _, _ = rref(checks) if checks.rows else (BitMatrix(0, 2 * n), [], 0)
    complement = []
    for vector in normalizer.row_vectors():
        if span.rows and reduce_vector(span, vector).is_zero():
            continue
        complement.append(vector)
        span, _, _ = rref(span.vstack(BitMatrix.from_vectors([vector], 2 * n)))

    def sp(u, v):
        return (u.to_array()[:n].astype(int) @ v.to_array()[n:].astype(int) +
                u.to_array()[n:].astype(int) @ v.to_array()[:n].astype(int)) & 1

    xs, zs = [], []
    pool = list(complement)
    while pool:
        v = pool.pop(0)
        partner = next((idx for idx, w in enumerate(pool) if sp(v, w)), None)
        if partner is None:
            raise InvalidCodeError("Logical complement is degenerate; checks may be dependent on logicals")
        w = pool.pop(partner)
        xs.append(v)
        zs.append(w)
        pool = [u ^ (v if sp(u, w) else BitVector(2 * n)) ^ (w if sp(u, v) else BitVector(2 * n)) for u in pool]

    logical_x = [PauliOperator.from_symplectic(v) for v in xs]
    logical_z = [PauliOperator.from_symplectic(w) for w in zs]
    logger.debug(f"Computed {len(xs)} logical pairs for {code.name or 'code'}")
    return code.with_logicals(logical_x, logical_z)


###############################################################################
# Validation
###############################################################################

class ValidationReport:
    ###############################################################################
    # ValidationReport - Summary of a code's invariants (never raises)
    ###############################################################################

    def __init__(self, name, n, k, check_weights, is_css, self_dual, violations):
        self.name = name
        self.n = n
        self.k = k
        self.check_weights = check_weights
        self.is_css = is_css
        self.self_dual = self_dual
        self.violations = violations

    @property
    def ok(self):
        return not self.violations

    @property
    def q_max(self):
        return max(self.check_weights) if self.check_weights else 0

    def to_dict(self):
        return {
            'name': self.name,
            'n': self.n,
            'k': self.k,
            'q_max': self.q_max,
            'check_weights': self.check_weights,
            'is_css': self.is_css,
            'self_dual': self.self_dual,
            'violations': self.violations,
        }

    def summary(self):
        """Print validation summary"""
        print(f"\n{'=' * 80}")
        print(f"CODE VALIDATION: {self.name or 'unnamed'}")
        print(f"{'=' * 80}")
        print(f"Parameters: [[{self.n},{self.k}]]   q_max: {self.q_max}")
        print(f"CSS: {self.is_css}   Self-dual: {self.self_dual}")
        if self.ok:
            print("✅ All invariants hold")
        else:
            print(f"❌ {len(self.violations)} violation(s):")
            for violation in self.violations:
                print(f"   - {violation}")
        print(f"{'=' * 80}\n")


def validate(code):
    """
    Check every structural invariant of a code

    Returns:
        ValidationReport: parameters plus a list of violation messages
    """
    violations = []
    n = code.n
    for i, a in enumerate(code.checks):
        for j in range(i + 1, len(code.checks)):
            if symplectic_product(a, code.checks[j]):
                violations.append(f"checks {i},{j} anticommute")

    try:
        k = code.k
    except Exception as exc:
        violations.append(f"rank computation failed: {exc}")
        k = -1

    if len(code.logical_x) != len(code.logical_z):
        violations.append(f"{len(code.logical_x)} logical X vs {len(code.logical_z)} logical Z operators")
    elif code.logical_x and len(code.logical_x) != k:
        violations.append(f"{len(code.logical_x)} logical pairs but k={k}")

    for kind, logicals in (('X', code.logical_x), ('Z', code.logical_z)):
        for i, logical in enumerate(logicals):
            for j, check in enumerate(code.checks):
                if symplectic_product(logical, check):
                    violations.append(f"logical {kind}{i} anticommutes with check {j}")
    if len(code.logical_x) == len(code.logical_z):
        for i, lx in enumerate(code.logical_x):
            for j, lz in enumerate(code.logical_z):
                if symplectic_product(lx, lz) != (i == j):
                    violations.append(f"logical pairing broken between X{i} and Z{j}")

    is_css = code.is_css()
    self_dual = False
    if isinstance(code, CssCode):
        self_dual = code.is_self_dual()
        if not code.css_orthogonal():
            violations.append("hx · hzᵀ ≠ 0")

    return ValidationReport(code.name, n, k, code.check_weights(), is_css, self_dual, violations)


def q_max(code):
    """Maximum check weight"""
    weights = code.check_weights()
    return max(weights) if weights else 0


def weight_enumerator(code):
    """Histogram {weight: count} of check weights"""
    counts = {}
    for w in code.check_weights():
        counts[w] = counts.get(w, 0) + 1
    return dict(sorted(counts.items()))


###############################################################################
# Text and JSON formats
###############################################################################

def write_code_text(code):
    """
    Serialize as: header 'n m k', m rows of 2n bits (x|z), then LX/LZ rows

    Returns:
        str: text block
    """
    lines = [f"{code.n} {len(code.checks)} {len(code.logical_x)}"]
    lines += [c.symplectic().to_string() for c in code.checks]
    lines += [f"LX {p.symplectic().to_string()}" for p in code.logical_x]
    lines += [f"LZ {p.symplectic().to_string()}" for p in code.logical_z]
    return '\n'.join(lines) + '\n'


def read_code_text(text, name=None):
    """
    Parse the code text format

    Raises:
        FormatError: on malformed input
    """
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.startswith('#')]
    if not lines:
        raise FormatError("Empty code definition")
    try:
        n, m, k = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise FormatError(f"Bad header line '{lines[0]}', expected 'n m k'")
    rows = lines[1:1 + m]
    if len(rows) != m:
        raise FormatError(f"Expected {m} check rows, found {len(rows)}")
    checks, lxs, lzs = [], [], []
    for row in rows:
        checks.append(_parse_symplectic_row(row, n))
    for line in lines[1 + m:]:
        tag, _, bits = line.partition(' ')
        if tag == 'LX':
            lxs.append(_parse_symplectic_row(bits, n))
        elif tag == 'LZ':
            lzs.append(_parse_symplectic_row(bits, n))
        else:
            raise FormatError(f"Unknown line tag '{tag}'")
    if len(lxs) != k or len(lzs) != k:
        if lxs or lzs:
            raise FormatError(f"Header announces {k} logical pairs, found {len(lxs)} LX and {len(lzs)} LZ")
    return StabilizerCode(n, checks, lxs or None, lzs or None, name)


def _parse_symplectic_row(row, n):
    bits = row.replace('|', '').replace(' ', '')
    if len(bits) != 2 * n or any(ch not in '01' for ch in bits):
        raise FormatError(f"Row '{row}' is not a {2 * n}-bit (x|z) vector")
    return PauliOperator.from_symplectic(BitVector.from_string(bits))


def code_to_dict(code):
    """JSON-ready dict with hx/hz (CSS) or checks, plus logicals as (x|z) bitstrings"""
    out = {
        'name': code.name,
        'n': code.n,
        'k': code.k,
        'checks': [c.symplectic().to_string() for c in code.checks],
        'logical_x': [p.symplectic().to_string() for p in code.logical_x],
        'logical_z': [p.symplectic().to_string() for p in code.logical_z],
    }
    if isinstance(code, CssCode):
        out['hx'] = code.hx.to_strings()
        out['hz'] = code.hz.to_strings()
    return out


def code_from_dict(data):
    """Inverse of code_to_dict"""
    try:
        n = int(data['n'])
        lxs = [PauliOperator.from_symplectic(BitVector.from_string(s)) for s in data.get('logical_x', [])]
        lzs = [PauliOperator.from_symplectic(BitVector.from_string(s)) for s in data.get('logical_z', [])]
        if 'hx' in data:
            hx = BitMatrix.from_rows(data['hx'], n) if data['hx'] else BitMatrix(0, n)
            hz = BitMatrix.from_rows(data['hz'], n) if data['hz'] else BitMatrix(0, n)
            return CssCode(n, hx, hz, lxs or None, lzs or None, data.get('name'))
        checks = [PauliOperator.from_symplectic(BitVector.from_string(s)) for s in data['checks']]
        return StabilizerCode(n, checks, lxs or None, lzs or None, data.get('name'))
    except (KeyError, ValueError) as exc:
        raise FormatError(f"Malformed code JSON: {exc}")
