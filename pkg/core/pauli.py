"""
###############################################################################
# Pauli - Binary-symplectic Pauli strings and symplectic matrices
###############################################################################
# A Pauli on n qubits is stored as (x | z) halves plus a power of i. Symplectic
# matrices use the row-vector convention: row i is the image of basis vector i
# (X̄_1..X̄_t first, then Z̄_1..Z̄_t) and "A then B" composes as A·B.
###############################################################################
"""

import numpy as np

from .f2 import BitMatrix, BitVector

_SIGN_PREFIX = {'': 0, '+': 0, 'i': 1, '+i': 1, '-': 2, '-i': 3}
_PREFIX_FOR_PHASE = {0: '+', 1: '+i', 2: '-', 3: '-i'}


class PauliOperator:
    ###############################################################################
    # PauliOperator - Signed Pauli string, e.g. +XZZX or -iYIZ
    ###############################################################################

    __slots__ = ('n', 'x', 'z', 'phase')

    def __init__(self, x, z, phase=0):
        """
        Initialize PauliOperator

        Args:
            x: BitVector of X components
            z: BitVector of Z components
            phase: Printed sign as a power of i (0: +1, 1: +i, 2: -1, 3: -i)
        """
        if x.length != z.length:
            raise ValueError(f"x and z halves differ in length: {x.length} vs {z.length}")
        self.n = x.length
        self.x = x
        self.z = z
        self.phase = phase % 4

    ###########################################################################
    # Constructors
    ###########################################################################

    @classmethod
    def from_string(cls, text):
        """
        Parse a Pauli string with optional sign prefix

        Example:
            PauliOperator.from_string('-XZZX')
        """
        text = text.strip()
        body_start = 0
        while body_start < len(text) and text[body_start] in '+-i':
            body_start += 1
        prefix, body = text[:body_start], text[body_start:]
        if prefix not in _SIGN_PREFIX:
            raise ValueError(f"Unrecognized Pauli sign prefix '{prefix}'")
        if any(ch not in 'IXYZ_' for ch in body):
            raise ValueError(f"Pauli string may only contain I, X, Y, Z: '{text}'")
        body = body.replace('_', 'I')
        x = BitVector.from_bits([ch in 'XY' for ch in body])
        z = BitVector.from_bits([ch in 'ZY' for ch in body])
        return cls(x, z, _SIGN_PREFIX[prefix])

    @classmethod
    def identity(cls, n):
        return cls(BitVector(n), BitVector(n))

    @classmethod
    def from_symplectic(cls, vector, phase=0):
        """Build from a (x | z) vector of length 2n"""
        if vector.length % 2:
            raise ValueError(f"Symplectic vector must have even length, got {vector.length}")
        bits = vector.to_array()
        n = vector.length // 2
        return cls(BitVector.from_bits(bits[:n]), BitVector.from_bits(bits[n:]), phase)

    @classmethod
    def single(cls, n, qubit, letter):
        """Single-qubit Pauli letter on one qubit of n"""
        body = ['I'] * n
        body[qubit] = letter
        return cls.from_string(''.join(body))

    @classmethod
    def x_type(cls, bits):
        bits = BitVector.from_bits(bits) if not isinstance(bits, BitVector) else bits
        return cls(bits, BitVector(bits.length))

    @classmethod
    def z_type(cls, bits):
        bits = BitVector.from_bits(bits) if not isinstance(bits, BitVector) else bits
        return cls(BitVector(bits.length), bits)

    ###########################################################################
    # Properties
    ###########################################################################

    def n_y(self):
        return (self.x & self.z).weight()

    def weight(self):
        """Number of qubits acted on non-trivially"""
        return BitVector(self.n, self.x.data | self.z.data).weight()

    def support(self):
        return BitVector(self.n, self.x.data | self.z.data).indices()

    def symplectic(self):
        """(x | z) vector of length 2n"""
        return self.x.concat(self.z)

    def is_x_type(self):
        return self.z.is_zero()

    def is_z_type(self):
        return self.x.is_zero()

    def sign(self):
        """Printed sign as a complex number"""
        return 1j ** self.phase

    def unsigned(self):
        return PauliOperator(self.x, self.z, 0)

    def letters(self):
        xs, zs = self.x.to_array(), self.z.to_array()
        return ''.join('IXZY'[int(a) + 2 * int(b)] for a, b in zip(xs, zs))

    def to_string(self, with_sign=True):
        body = self.letters()
        return (_PREFIX_FOR_PHASE[self.phase] + body) if with_sign else body

    ###########################################################################
    # Algebra
    ###########################################################################

    def __mul__(self, other):
        """Operator product self·other with the symplectic sign rule"""
        if self.n != other.n:
            raise ValueError(f"Pauli size mismatch: {self.n} vs {other.n}")
        # Work in the X^x Z^z normal form, where Y = i XZ
        e1 = self.phase + self.n_y()
        e2 = other.phase + other.n_y()
        e = e1 + e2 + 2 * self.z.dot(other.x)
        x = self.x ^ other.x
        z = self.z ^ other.z
        n_y = (x & z).weight()
        return PauliOperator(x, z, e - n_y)

    def commutes(self, other):
        return symplectic_product(self, other) == 0

    def restricted(self, qubits):
        """Restriction to a subset of qubits (sign dropped)"""
        qubits = list(qubits)
        xs, zs = self.x.to_array(), self.z.to_array()
        return PauliOperator(BitVector.from_bits(xs[qubits]), BitVector.from_bits(zs[qubits]))

    def embedded(self, n, qubits):
        """Place this Pauli on the given qubits of an n-qubit register"""
        qubits = list(qubits)
        if len(qubits) != self.n:
            raise ValueError(f"Need {self.n} target qubits, got {len(qubits)}")
        xs = np.zeros(n, dtype=bool)
        zs = np.zeros(n, dtype=bool)
        xs[qubits] = self.x.to_array()
        zs[qubits] = self.z.to_array()
        return PauliOperator(BitVector.from_bits(xs), BitVector.from_bits(zs), self.phase)

    def __eq__(self, other):
        return isinstance(other, PauliOperator) and self.x == other.x and self.z == other.z and \
            self.phase == other.phase

    def __hash__(self):
        return hash((self.x, self.z, self.phase))

    def __repr__(self):
        return f"PauliOperator('{self.to_string()}')"


def symplectic_product(p, q):
    """
    Commutation bit of two Paulis

    Returns:
        int: 0 iff p and q commute, computed as p.x·q.z + p.z·q.x mod 2

    Example:
        symplectic_product(PauliOperator.from_string('XXII'),
                           PauliOperator.from_string('ZIZI'))  # 1
    """
    if p.n != q.n:
        raise ValueError(f"Pauli size mismatch: {p.n} vs {q.n}")
    return (p.x.dot(q.z) + p.z.dot(q.x)) & 1


def symplectic_vector_product(u, v):
    """Symplectic product of two (x | z) BitVectors"""
    if u.length != v.length or u.length % 2:
        raise ValueError("Symplectic vectors must share an even length")
    n = u.length // 2
    a, b = u.to_array(), v.to_array()
    return int((np.sum(a[:n] & b[n:]) + np.sum(a[n:] & b[:n])) & 1)


def lambda_form(t):
    """The standard symplectic form Λ = [[0, I], [I, 0]] on 2t coordinates"""
    eye = np.eye(t, dtype=bool)
    zero = np.zeros((t, t), dtype=bool)
    return BitMatrix.from_array(np.block([[zero, eye], [eye, zero]]), 2 * t)


class SymplecticMatrix:
    ###############################################################################
    # SymplecticMatrix - Element of Sp_2t(F2) acting on logical Pauli space
    ###############################################################################

    __slots__ = ('m', 't')

    def __init__(self, m):
        """
        Initialize SymplecticMatrix

        Args:
            m: 2t x 2t BitMatrix, X-block columns first then Z-block
        """
        if m.rows != m.cols or m.rows % 2:
            raise ValueError(f"Symplectic matrix must be square of even size, got {m.rows}x{m.cols}")
        self.m = m
        self.t = m.rows // 2

    @classmethod
    def identity(cls, t):
        return cls(BitMatrix.identity(2 * t))

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array, dtype=bool)
        return cls(BitMatrix.from_array(array, array.shape[1]))

    @classmethod
    def from_blocks(cls, a, b, c, d):
        """Assemble [[A, B], [C, D]] from t x t 0/1 arrays"""
        return cls.from_array(np.block([[np.asarray(a, dtype=bool), np.asarray(b, dtype=bool)],
                                        [np.asarray(c, dtype=bool), np.asarray(d, dtype=bool)]]))

    @classmethod
    def from_key(cls, t, key):
        """Inverse of key()"""
        array = np.array([[(row >> j) & 1 for j in range(2 * t)] for row in key], dtype=bool)
        return cls.from_array(array.reshape(2 * t, 2 * t))

    def key(self):
        """Rows as integers with column j at bit j (hashable, used by group searches)"""
        return tuple(sum(1 << int(j) for j in np.flatnonzero(row)) for row in self.m.to_array())

    def to_array(self):
        return self.m.to_array()

    def blocks(self):
        """(A, B, C, D) t x t boolean blocks"""
        array = self.to_array()
        t = self.t
        return array[:t, :t], array[:t, t:], array[t:, :t], array[t:, t:]

    def compose(self, other):
        """self then other"""
        if self.t != other.t:
            raise ValueError(f"Dimension mismatch: Sp{2 * self.t} vs Sp{2 * other.t}")
        return SymplecticMatrix(self.m @ other.m)

    __matmul__ = compose

    def inverse(self):
        lam = lambda_form(self.t)
        return SymplecticMatrix(lam @ self.m.transpose() @ lam)

    def is_identity(self):
        return self.m == BitMatrix.identity(2 * self.t)

    def to_strings(self):
        return self.m.to_strings()

    def __eq__(self, other):
        return isinstance(other, SymplecticMatrix) and self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __repr__(self):
        return f"SymplecticMatrix(Sp{2 * self.t}: {self.to_strings()})"


def is_symplectic(matrix):
    """
    True iff Mᵀ Λ M = Λ

    Args:
        matrix: SymplecticMatrix or square BitMatrix of even size
    """
    m = matrix.m if isinstance(matrix, SymplecticMatrix) else matrix
    if m.rows != m.cols or m.rows % 2:
        return False
    lam = lambda_form(m.rows // 2)
    return m.transpose() @ lam @ m == lam


def transvection(v):
    """
    Symplectic transvection x ↦ x + ⟨x, v⟩ v as a SymplecticMatrix

    Args:
        v: BitVector of length 2t
    """
    t = v.length // 2
    bits = v.to_array().astype(np.uint8)
    lam = lambda_form(t).to_array().astype(np.uint8)
    # Row i (image of e_i) = e_i + ⟨e_i, v⟩ v, with ⟨e_i, v⟩ = (Λ v)_i
    inner = (lam @ bits) & 1
    array = (np.eye(2 * t, dtype=np.uint8) + np.outer(inner, bits)) & 1
    return SymplecticMatrix.from_array(array)
