import numpy as np
import pytest

from core.decoder import (BpOsdDecoder, ConcatenatedDecoder, DecodingProblem, bp, heavy_postselect,
                          maximum_likelihood, osd, prior_update, triggered_blocks)
from core.exceptions import InconsistentSyndromeError
from core.noise import NoiseModel, annotate
from core.protocols import PrepPolicy, build_prep_experiment_circuit
from core.simulation import extract_dem


@pytest.fixture
def repetition():
    h = [[1, 1, 0], [0, 1, 1]]
    return DecodingProblem(h, [0.2, 0.05, 0.2], [[1, 0, 0]])


def _random_problem(rng, detectors=6, mechanisms=12):
    h = rng.integers(0, 2, size=(detectors, mechanisms))
    priors = rng.uniform(0.01, 0.3, size=mechanisms)
    return DecodingProblem(h, priors, np.zeros((0, mechanisms)))


def test_problem_validation():
    with pytest.raises(ValueError):
        DecodingProblem([[1, 0]], [0.1, 0.6], [[1, 0]])
    with pytest.raises(ValueError):
        DecodingProblem([[1, 0]], [0.1], [[1, 0]])


def test_bp_on_zero_syndrome(repetition):
    _, estimate, converged = bp(repetition, [False, False])
    assert converged
    assert not estimate.any()


def test_bp_finds_single_flip(repetition):
    _, estimate, converged = bp(repetition, [True, False])
    assert converged
    assert estimate.tolist() == [True, False, False]


@pytest.mark.parametrize('seed', range(5))
def test_full_order_osd_is_maximum_likelihood(seed):
    rng = np.random.default_rng(seed)
    problem = _random_problem(rng)
    error = rng.random(problem.n_mechanisms) < 0.2
    syndrome = problem.syndrome_of(error)
    estimate = osd(problem, syndrome, problem.weights(), order=problem.n_mechanisms)
    best = maximum_likelihood(problem, syndrome)
    weights = problem.weights()
    assert np.array_equal(problem.syndrome_of(estimate), syndrome)
    assert weights[estimate].sum() == pytest.approx(weights[best].sum())


def test_osd_zero_reproduces_syndrome():
    problem = _random_problem(np.random.default_rng(9), detectors=8, mechanisms=20)
    error = np.zeros(20, dtype=bool)
    error[[3, 11]] = True
    syndrome = problem.syndrome_of(error)
    estimate = osd(problem, syndrome, problem.weights(), order=0)
    assert np.array_equal(problem.syndrome_of(estimate), syndrome)


def test_osd_errors():
    problem = DecodingProblem([[1, 0], [1, 0]], [0.1, 0.1], [[1, 0]])
    with pytest.raises(InconsistentSyndromeError):
        osd(problem, [True, False], problem.weights())
    with pytest.raises(ValueError):
        osd(problem, [True, True], problem.weights(), order=-1)


def test_inconsistent_syndrome_counts_as_failure():
    problem = DecodingProblem([[1, 0], [1, 0]], [0.1, 0.1], [[1, 0]])
    decoder = BpOsdDecoder(problem)
    assert not decoder.decode([True, False]).consistent
    _, failures = decoder.decode_batch([[True, False], [True, True]], [[False], [True]])
    assert failures.tolist() == [True, False]


def test_decode_batch_predictions(repetition):
    decoder = BpOsdDecoder(repetition)
    predictions, failures = decoder.decode_batch([[True, False], [False, True], [False, False]],
                                                 [[True], [False], [True]])
    assert predictions[:, 0].tolist() == [True, False, False]
    assert failures.tolist() == [False, False, True]


def test_unknown_backend(repetition):
    with pytest.raises(ValueError):
        BpOsdDecoder(repetition, backend='gpu')


###############################################################################
# Concatenation heuristics
###############################################################################

def test_triggered_blocks():
    bits = triggered_blocks([True, False, False, True], [[0, 1], [2], [3]])
    assert bits.tolist() == [True, False, True]


def test_heavy_postselect():
    assert heavy_postselect([True, True, False], 4)
    assert not heavy_postselect([True, True, False], 6)
    assert not heavy_postselect([False, False], 4)


def test_prior_update():
    problem = DecodingProblem([[1, 1, 0], [0, 0, 1]], [0.1, 0.3, 0.1], [[1, 0, 0]])
    assert np.allclose(prior_update(problem, [False, False], [[0], [1]]), problem.priors)
    assert np.allclose(prior_update(problem, [True, False], [[0], [1]]), [0.5, 0.5, 0.1])


def test_concatenated_decoder_discards_heavy_shots():
    problem = DecodingProblem(np.eye(3, dtype=int), [0.01, 0.01, 0.01], [[1, 1, 0]])
    decoder = ConcatenatedDecoder(problem, [[0], [1], [2]], distance=4)
    failures, discarded = decoder.decode_batch([[True, True, False], [True, False, False]],
                                               [[False], [True]])
    assert discarded.tolist() == [True, False]
    assert failures.tolist() == [False, False]


###############################################################################
# Sub-models of a circuit DEM
###############################################################################

def _sub_problems(problem, rng, count, smallest=10, largest=16):
    n = problem.n_mechanisms
    while count:
        columns = rng.choice(n, size=rng.integers(smallest, largest + 1), replace=False)
        rows = problem.h[:, columns].any(axis=1)
        if not rows.any():
            continue
        count -= 1
        yield DecodingProblem(problem.h[rows][:, columns], problem.priors[columns],
                              problem.observables[:, columns])


@pytest.fixture(scope='module')
def prep_problem(c422):
    circuit = build_prep_experiment_circuit(c422.csd, c422.layout, PrepPolicy('Z'))
    return DecodingProblem.from_dem(extract_dem(annotate(circuit, NoiseModel(1e-3))))


@pytest.mark.slow
def test_prep_sub_model_decoding_matches_maximum_likelihood(prep_problem, config):
    rng = np.random.default_rng(31)
    config.update(osd_order=16)
    exact = agreeing = 0
    for sub in _sub_problems(prep_problem, rng, 200):
        error = np.zeros(sub.n_mechanisms, dtype=bool)
        error[rng.choice(sub.n_mechanisms, size=rng.integers(1, 4), replace=False)] = True
        syndrome = sub.syndrome_of(error)
        weights = sub.weights()
        best = weights[maximum_likelihood(sub, syndrome)].sum()

        posterior, _, _ = bp(sub, syndrome)
        estimate = osd(sub, syndrome, posterior, order=sub.n_mechanisms)
        assert np.array_equal(sub.syndrome_of(estimate), syndrome)
        exact += np.isclose(weights[estimate].sum(), best)

        outcome = BpOsdDecoder(sub, config).decode(syndrome)
        assert outcome.consistent
        assert np.array_equal(sub.syndrome_of(outcome.estimate), syndrome)
        agreeing += np.isclose(outcome.weight, best)
    assert exact == 200
    assert agreeing >= 198
