"""
###############################################################################
# F2 - Bit-packed GF(2) vectors and matrices
###############################################################################
# Rows are packed into little-endian 64-bit words: bit j of a row lives in
# word j // 64 at position j % 64. All row operations are wordwise XOR.
###############################################################################
"""

import numpy as np

from .exceptions import NoSolutionError

WORD = 64
_ONE = np.uint64(1)
_SHIFTS = np.arange(WORD, dtype=np.uint64)


def n_words(n_bits):
    """Number of 64-bit words needed to hold n_bits"""
    return max(1, (n_bits + WORD - 1) // WORD)


def pack_bits(array):
    """
    Pack a 2D boolean array row-wise into uint64 words

    Args:
        array: (rows, cols) array of 0/1 values

    Returns:
        np.ndarray: (rows, n_words(cols)) uint64 array
    """
    array = np.asarray(array, dtype=bool)
    if array.ndim != 2:
        raise ValueError(f"pack_bits expects a 2D array, got shape {array.shape}")
    rows, cols = array.shape
    words = n_words(cols)
    padded = np.zeros((rows, words * WORD), dtype=bool)
    padded[:, :cols] = array
    packed = np.packbits(padded, axis=1, bitorder='little')
    return np.ascontiguousarray(packed).view('<u8').astype(np.uint64).reshape(rows, words)


def unpack_bits(data, cols):
    """Inverse of pack_bits"""
    data = np.ascontiguousarray(np.asarray(data, dtype='<u8'))
    rows = data.shape[0]
    if rows == 0:
        return np.zeros((0, cols), dtype=bool)
    as_bytes = data.view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder='little')[:, :cols].astype(bool)


def popcount(data):
    """Number of set bits in a packed array"""
    data = np.ascontiguousarray(np.asarray(data, dtype='<u8'))
    return int(np.unpackbits(data.view(np.uint8)).sum())


class BitVector:
    ###############################################################################
    # BitVector - Packed GF(2) vector (syndromes, error patterns, Pauli halves)
    ###############################################################################

    __slots__ = ('length', 'data')

    def __init__(self, length, data=None):
        """
        Initialize BitVector

        Args:
            length: Number of bits
            data: Optional packed uint64 words (copied)
        """
        if length < 0:
            raise ValueError(f"BitVector length must be non-negative, got {length}")
        self.length = length
        if data is None:
            self.data = np.zeros(n_words(length), dtype=np.uint64)
        else:
            self.data = np.array(data, dtype=np.uint64).reshape(n_words(length))

    @classmethod
    def from_bits(cls, bits):
        bits = np.asarray(bits, dtype=bool).reshape(1, -1)
        return cls(bits.shape[1], pack_bits(bits)[0])

    @classmethod
    def from_string(cls, text):
        """Build from a '0'/'1' string, e.g. BitVector.from_string('1001')"""
        if any(ch not in '01' for ch in text):
            raise ValueError(f"Bit string may only contain 0 and 1: '{text}'")
        return cls.from_bits([ch == '1' for ch in text])

    @classmethod
    def from_indices(cls, length, indices):
        bits = np.zeros(length, dtype=bool)
        bits[list(indices)] = True
        return cls.from_bits(bits)

    def to_array(self):
        return unpack_bits(self.data.reshape(1, -1), self.length)[0]

    def to_string(self):
        return ''.join('1' if b else '0' for b in self.to_array())

    def indices(self):
        return [int(i) for i in np.flatnonzero(self.to_array())]

    def weight(self):
        return popcount(self.data)

    def __getitem__(self, index):
        if not 0 <= index < self.length:
            raise IndexError(f"bit {index} out of range for length {self.length}")
        word, bit = divmod(index, WORD)
        return int((self.data[word] >> _SHIFTS[bit]) & _ONE)

    def flip(self, index):
        """Return a copy with one bit flipped"""
        out = BitVector(self.length, self.data)
        word, bit = divmod(index, WORD)
        out.data[word] ^= _ONE << _SHIFTS[bit]
        return out

    def _check_length(self, other):
        if self.length != other.length:
            raise ValueError(f"BitVector length mismatch: {self.length} vs {other.length}")

    def __xor__(self, other):
        self._check_length(other)
        return BitVector(self.length, self.data ^ other.data)

    def __and__(self, other):
        self._check_length(other)
        return BitVector(self.length, self.data & other.data)

    def dot(self, other):
        """Inner product mod 2"""
        self._check_length(other)
        return popcount(self.data & other.data) & 1

    def is_zero(self):
        return not np.any(self.data)

    def concat(self, other):
        return BitVector.from_bits(np.concatenate([self.to_array(), other.to_array()]))

    def __eq__(self, other):
        return isinstance(other, BitVector) and self.length == other.length and \
            np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.length, self.data.tobytes()))

    def __len__(self):
        return self.length

    def __repr__(self):
        return f"BitVector('{self.to_string()}')"


class BitMatrix:
    ###############################################################################
    # BitMatrix - Row-major packed GF(2) matrix
    ###############################################################################

    __slots__ = ('rows', 'cols', 'data')

    def __init__(self, rows, cols, data=None):
        """
        Initialize BitMatrix

        Args:
            rows: Number of rows
            cols: Number of columns
            data: Optional (rows, n_words(cols)) uint64 array (copied)
        """
        if rows < 0 or cols < 0:
            raise ValueError(f"BitMatrix shape must be non-negative, got ({rows}, {cols})")
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = np.zeros((rows, n_words(cols)), dtype=np.uint64)
        else:
            self.data = np.array(data, dtype=np.uint64).reshape(rows, n_words(cols))

    ###########################################################################
    # Constructors
    ###########################################################################

    @classmethod
    def from_array(cls, array, cols=None):
        array = np.asarray(array, dtype=bool)
        if array.ndim == 1:
            array = array.reshape(1, -1) if array.size else np.zeros((0, cols or 0), dtype=bool)
        if array.shape[0] == 0:
            return cls(0, cols if cols is not None else array.shape[1])
        return cls(array.shape[0], array.shape[1], pack_bits(array))

    @classmethod
    def from_rows(cls, rows, cols=None):
        """
        Build from bit strings

        Example:
            H = BitMatrix.from_rows(['10010110', '01101001'])
        """
        rows = [row.replace(' ', '').replace('|', '') for row in rows]
        if not rows:
            return cls(0, cols or 0)
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise ValueError(f"Rows have inconsistent widths: {sorted(widths)}")
        return cls.from_array([[ch == '1' for ch in row] for row in rows])

    @classmethod
    def from_vectors(cls, vectors, cols):
        vectors = list(vectors)
        if not vectors:
            return cls(0, cols)
        return cls.from_array(np.array([v.to_array() for v in vectors]), cols)

    @classmethod
    def identity(cls, n):
        return cls.from_array(np.eye(n, dtype=bool)) if n else cls(0, 0)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    ###########################################################################
    # Views
    ###########################################################################

    def to_array(self):
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=bool)
        return unpack_bits(self.data, self.cols)

    def to_strings(self):
        return [''.join('1' if b else '0' for b in row) for row in self.to_array()]

    def row(self, index):
        return BitVector(self.cols, self.data[index])

    def row_vectors(self):
        return [self.row(i) for i in range(self.rows)]

    def column(self, index):
        word, bit = divmod(index, WORD)
        return ((self.data[:, word] >> _SHIFTS[bit]) & _ONE).astype(bool)

    def row_weights(self):
        return self.to_array().sum(axis=1).astype(int)

    ###########################################################################
    # Algebra
    ###########################################################################

    def transpose(self):
        return BitMatrix.from_array(self.to_array().T, self.rows)

    @property
    def T(self):
        return self.transpose()

    def matmul(self, other):
        """Matrix product over GF(2)"""
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch: ({self.rows},{self.cols}) @ ({other.rows},{other.cols})")
        product = (self.to_array().astype(np.uint32) @ other.to_array().astype(np.uint32)) & 1
        return BitMatrix.from_array(product.astype(bool), other.cols)

    __matmul__ = matmul

    def apply(self, vector):
        """M·v for a BitVector v of length cols"""
        if vector.length != self.cols:
            raise ValueError(f"Vector length {vector.length} does not match {self.cols} columns")
        bits = np.zeros(self.rows, dtype=bool)
        for i in range(self.rows):
            bits[i] = popcount(self.data[i] & vector.data) & 1
        return BitVector.from_bits(bits)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("Shape mismatch in BitMatrix addition")
        return BitMatrix(self.rows, self.cols, self.data ^ other.data)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError(f"hstack row mismatch: {self.rows} vs {other.rows}")
        return BitMatrix.from_array(np.hstack([self.to_array(), other.to_array()]), self.cols + other.cols)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError(f"vstack column mismatch: {self.cols} vs {other.cols}")
        return BitMatrix(self.rows + other.rows, self.cols, np.vstack([self.data, other.data]))

    def permute_columns(self, perm):
        """Column j of the result is column perm[j] of self"""
        return BitMatrix.from_array(self.to_array()[:, list(perm)], self.cols)

    def select_rows(self, indices):
        indices = list(indices)
        return BitMatrix(len(indices), self.cols, self.data[indices] if indices else None)

    def rank(self):
        return rref(self)[2]

    def row_space_contains(self, vector):
        """True if vector is a GF(2) combination of the rows"""
        return reduce_vector(rref(self)[0], vector).is_zero()

    def __eq__(self, other):
        return isinstance(other, BitMatrix) and (self.rows, self.cols) == (other.rows, other.cols) and \
            np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"


###############################################################################
# Elimination
###############################################################################

def rref_packed(data, cols, col_order=None):
    """
    Reduced row echelon form on a packed array (in place on a copy)

    Args:
        data: (rows, words) uint64 array
        cols: Number of meaningful columns
        col_order: Optional order in which columns are tried as pivots

    Returns:
        tuple: (reduced data, pivot column list)
    """
    data = np.array(data, dtype=np.uint64, copy=True)
    rows = data.shape[0]
    pivots = []
    r = 0
    order = range(cols) if col_order is None else col_order
    for c in order:
        if r == rows:
            break
        word, bit = divmod(int(c), WORD)
        column = (data[:, word] >> _SHIFTS[bit]) & _ONE
        candidates = np.flatnonzero(column[r:])
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        mask = column.astype(bool) if p == r else ((data[:, word] >> _SHIFTS[bit]) & _ONE).astype(bool)
        mask[r] = False
        if mask.any():
            data[mask] ^= data[r]
        pivots.append(int(c))
        r += 1
    return data, pivots


def rref(matrix):
    """
    Reduced row echelon form

    Args:
        matrix: BitMatrix

    Returns:
        tuple: (R, pivots, rank) where R is row-equivalent to matrix, every pivot
               column holds a single 1, and rank = len(pivots)

    Example:
        R, pivots, rank = rref(BitMatrix.from_rows(['10010110', '01101001']))
        # rank == 2
    """
    if matrix.rows == 0:
        return BitMatrix(0, matrix.cols), [], 0
    data, pivots = rref_packed(matrix.data, matrix.cols)
    return BitMatrix(matrix.rows, matrix.cols, data), pivots, len(pivots)


def reduce_vector(reduced, vector):
    """Reduce vector against the rows of an rref matrix"""
    out = BitVector(vector.length, vector.data)
    for i in range(reduced.rows):
        row = reduced.data[i]
        if not np.any(row):
            continue
        lead = _leading_bit(row)
        if out[lead]:
            out.data ^= row
    return out


def _leading_bit(row):
    for word_index, word in enumerate(row):
        if word:
            word = int(word)
            return word_index * WORD + ((word & -word).bit_length() - 1)
    return -1


def kernel(matrix):
    """
    Null space basis {v : M v = 0}

    Returns:
        BitMatrix: rows span the kernel; row count = cols - rank(M)
    """
    R, pivots, rank = rref(matrix)
    free = [c for c in range(matrix.cols) if c not in set(pivots)]
    if not free:
        return BitMatrix(0, matrix.cols)
    reduced = R.to_array()[:rank]
    basis = np.zeros((len(free), matrix.cols), dtype=bool)
    for k, f in enumerate(free):
        basis[k, f] = True
        for i, p in enumerate(pivots):
            basis[k, p] = reduced[i, f]
    return BitMatrix.from_array(basis, matrix.cols)


def solve(matrix, b):
    """
    Solve M x = b over GF(2)

    Args:
        matrix: BitMatrix (rows x cols)
        b: BitVector of length rows

    Returns:
        BitVector x of length cols (free variables set to 0)

    Raises:
        NoSolutionError: when b is not in the column space of M
    """
    if b.length != matrix.rows:
        raise ValueError(f"Right-hand side length {b.length} does not match {matrix.rows} rows")
    if matrix.rows == 0:
        return BitVector(matrix.cols)
    augmented = np.hstack([matrix.to_array(), b.to_array().reshape(-1, 1)])
    data, pivots = rref_packed(pack_bits(augmented), matrix.cols + 1)
    if matrix.cols in pivots:
        raise NoSolutionError("Right-hand side is not in the column space")
    reduced = unpack_bits(data, matrix.cols + 1)
    x = np.zeros(matrix.cols, dtype=bool)
    for i, p in enumerate(pivots):
        x[p] = reduced[i, matrix.cols]
    return BitVector.from_bits(x)


def independent_rows(matrix):
    """Indices of a maximal set of linearly independent rows, greedy in row order"""
    chosen = []
    basis = BitMatrix(0, matrix.cols)
    for i in range(matrix.rows):
        candidate = basis.vstack(matrix.select_rows([i]))
        if candidate.rank() > basis.rows:
            chosen.append(i)
            basis = candidate
    return chosen
