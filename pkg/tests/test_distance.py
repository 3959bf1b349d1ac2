import pytest

from core.codes import CssCode
from core.construction import build_csd, c4_code
from core.distance import estimate_distance
from core.f2 import BitMatrix

# seed -> (d of the concatenated code, d of the double)
DISTANCES = {
    'c422': (4, 2),
    'c513': (6, 3),
    'c833': (6, 3),
    'c1244': (8, 4),
}


def _assert_logical_witness(code, estimate):
    witness = estimate.witness
    assert witness.weight() == estimate.d_est
    assert not code.in_stabilizer_group(witness)
    assert all(witness.commutes(check) for check in code.checks)


def test_c4_distance():
    d, witness = estimate_distance(c4_code(), trials=20, seed=7)
    assert d == 2
    assert witness.weight() == 2


def test_c422_distances(c422):
    csd_estimate = estimate_distance(c422.csd, trials=1000, seed=7)
    assert csd_estimate.d_est == 4
    _assert_logical_witness(c422.csd, csd_estimate)
    assert estimate_distance(c422.double, trials=1000, seed=7).d_est == 2


def test_threads_do_not_change_result(c513):
    serial = estimate_distance(c513.csd, trials=200, seed=3, threads=1)
    threaded = estimate_distance(c513.csd, trials=200, seed=3, threads=4)
    assert serial.d_est == threaded.d_est
    assert serial.sector_weights == threaded.sector_weights


def test_more_trials_never_increase_estimate(c513):
    few = estimate_distance(c513.csd, trials=50, seed=5).d_est
    many = estimate_distance(c513.csd, trials=500, seed=5).d_est
    assert many <= few


def test_code_without_logicals():
    code = CssCode(2, BitMatrix.from_rows(['11']), BitMatrix.from_rows(['11']))
    assert estimate_distance(code, trials=5).d_est == 0


def test_rejects_zero_trials():
    with pytest.raises(ValueError):
        estimate_distance(c4_code(), trials=0)


@pytest.mark.slow
@pytest.mark.parametrize('seed', sorted(DISTANCES))
def test_reference_distances(seed):
    construction = build_csd(seed)
    d_csd, d_double = DISTANCES[seed]
    estimate = estimate_distance(construction.csd, trials=1000, seed=7)
    assert estimate.d_est == d_csd
    _assert_logical_witness(construction.csd, estimate)
    assert estimate_distance(construction.double, trials=1000, seed=7).d_est == d_double
