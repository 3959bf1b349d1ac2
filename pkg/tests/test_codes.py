import numpy as np
import pytest

from core.codes import (CssCode, StabilizerCode, ZXDuality, code_from_dict, code_to_dict, compute_logicals,
                        q_max, read_code_text, validate, write_code_text)
from core.construction import (build_csd, c4_block_pattern, c4_code, concatenate_c4, hadamard_transform,
                               many_hypercube, seed_library, symplectic_double)
from core.exceptions import FormatError, InvalidDualityError, UnknownSeedError
from core.f2 import BitMatrix
from core.pauli import PauliOperator, symplectic_product

# seed -> (n, k, q_max) of the concatenated code
GOLDEN = {
    'c422': (16, 4, 8),
    'c513': (20, 2, 8),
    'c833': (32, 6, 16),
    'c1244': (48, 8, 16),
}


def test_c422_seed_checks():
    seed = seed_library('c422')
    assert [c.to_string(with_sign=False) for c in seed.checks] == ['XZZX', 'ZXXZ']
    assert seed.k == 2
    assert validate(seed).ok


def test_unknown_seed():
    with pytest.raises(UnknownSeedError):
        seed_library('c999')


def test_hadamard_transform_of_c4_is_c422_structure():
    transformed = hadamard_transform(c4_code(), [0, 1, 1, 0])
    assert [c.to_string(with_sign=False) for c in transformed.checks] == ['XZZX', 'ZXXZ']


def test_double_of_c422():
    double, tau = symplectic_double(seed_library('c422'))
    assert double.hx.to_strings() == ['10010110', '01101001']
    assert double.hz.to_strings() == ['01101001', '10010110']
    assert (double.n, double.k) == (8, 4)
    assert tau.orbits() == [(0, 4), (1, 5), (2, 6), (3, 7)]
    assert validate(double).ok


@pytest.mark.parametrize('seed', sorted(GOLDEN))
def test_csd_parameters(seed):
    n, k, weight = GOLDEN[seed]
    construction = build_csd(seed)
    report = validate(construction.csd)
    assert report.ok, report.violations
    assert (report.n, report.k) == (n, k)
    assert report.q_max == weight
    assert report.self_dual
    assert construction.csd.n_logicals == k


def test_csd_rows_start_with_c4_checks(c422):
    hx = c422.csd.hx.to_array()
    for b in c422.layout.c4_rows():
        assert hx[b].nonzero()[0].tolist() == [4 * b, 4 * b + 1, 4 * b + 2, 4 * b + 3]
    assert c422.layout.concat_rows() == [4, 5]


def test_concatenate_rejects_mismatched_duality(c422):
    with pytest.raises(InvalidDualityError):
        concatenate_c4(c422.double, ZXDuality.standard(6))


def test_duality_must_be_fixed_point_free():
    with pytest.raises(InvalidDualityError):
        ZXDuality([0, 1])


def test_many_hypercube_level_three():
    level_three = many_hypercube()
    assert (level_three.csd.n, level_three.csd.k) == (64, 8)


def test_validate_reports_anticommuting_checks():
    checks = [PauliOperator.from_string('XI'), PauliOperator.from_string('ZI')]
    report = validate(StabilizerCode(2, checks))
    assert not report.ok
    assert any('anticommute' in v for v in report.violations)


def test_computed_logicals_are_symplectic():
    seed = seed_library('c513')
    assert seed.k == 1
    lx, lz = seed.logical_x[0], seed.logical_z[0]
    assert symplectic_product(lx, lz) == 1
    assert all(symplectic_product(lx, c) == 0 for c in seed.checks)


def test_compute_logicals_keeps_valid_basis():
    code = c4_code()
    assert compute_logicals(code) is code


def test_code_text_round_trip():
    seed = seed_library('c513')
    parsed = read_code_text(write_code_text(seed))
    assert parsed.check_matrix() == seed.check_matrix()
    assert parsed.logical_matrix() == seed.logical_matrix()


def test_code_text_rejects_bad_rows():
    with pytest.raises(FormatError):
        read_code_text("2 1 0\n101\n")
    with pytest.raises(FormatError):
        read_code_text("")


def test_code_json_round_trip(c422):
    restored = code_from_dict(code_to_dict(c422.csd))
    assert isinstance(restored, CssCode)
    assert restored.hx == c422.csd.hx
    assert restored.logical_matrix() == c422.csd.logical_matrix()
    assert q_max(restored) == 8


def test_css_orthogonality_violation():
    code = CssCode(2, BitMatrix.from_rows(['10']), BitMatrix.from_rows(['10']))
    assert any('hx' in v for v in validate(code).violations)


def test_c4_block_pattern():
    assert c4_block_pattern(2) == [0, 1, 1, 0, 0, 1, 1, 0]
    assert np.array_equal(np.nonzero(c4_block_pattern(1))[0], [1, 2])
