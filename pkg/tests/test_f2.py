import numpy as np
import pytest

from core.exceptions import NoSolutionError
from core.f2 import BitMatrix, BitVector, kernel, pack_bits, rref, rref_packed, solve, unpack_bits


def test_rref_rank_and_pivots():
    m = BitMatrix.from_rows(['1100', '0110', '1010'])
    reduced, pivots, rank = rref(m)
    assert rank == 2
    assert pivots == [0, 1]
    assert reduced.to_strings()[:2] == ['1010', '0110']


def test_kernel_is_annihilated():
    m = BitMatrix.from_rows(['10010110', '01101001'])
    ker = kernel(m)
    assert ker.rows == 6
    product = (m.to_array().astype(int) @ ker.to_array().T.astype(int)) % 2
    assert not product.any()


def test_solve_and_no_solution():
    m = BitMatrix.from_rows(['110', '011'])
    x = solve(m, BitVector.from_string('10'))
    assert m.apply(x) == BitVector.from_string('10')
    with pytest.raises(NoSolutionError):
        solve(BitMatrix.from_rows(['11', '11']), BitVector.from_string('10'))


def test_pack_unpack_wide_rows():
    rng = np.random.default_rng(3)
    bits = rng.random((5, 130)) < 0.5
    assert np.array_equal(unpack_bits(pack_bits(bits), 130), bits)
    assert unpack_bits(np.zeros((0, 3), dtype=np.uint64), 130).shape == (0, 130)


def test_rref_packed_follows_column_order():
    bits = np.array([[1, 1, 0], [0, 1, 1]], dtype=bool)
    _, pivots = rref_packed(pack_bits(bits), 3, col_order=[2, 1, 0])
    assert pivots == [2, 1]


def test_row_space_contains():
    m = BitMatrix.from_rows(['1100', '0011'])
    assert m.row_space_contains(BitVector.from_string('1111'))
    assert not m.row_space_contains(BitVector.from_string('1000'))
