"""
###############################################################################
# Distance - Minimum distance estimation by random information sets
###############################################################################
# Each trial draws a random column order, row-reduces a generator matrix of
# the sector's normalizer in that order and inspects the resulting (sparse)
# rows plus their pairwise sums. Rows that act non-trivially on the logical
# space are candidate logicals; the lightest one found is kept.
###############################################################################
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .codes import CssCode, compute_logicals
from .f2 import BitVector, kernel, pack_bits, rref_packed, unpack_bits
from .pauli import PauliOperator, lambda_form

logger = logging.getLogger(__name__)

# Trials per PRNG stream; fixed so the sampled sets do not depend on threading
TRIALS_PER_STREAM = 50


class DistanceEstimate:
    ###############################################################################
    # DistanceEstimate - Best weight found per sector plus a witness
    ###############################################################################

    def __init__(self, d_est, witness, sector_weights, trials):
        self.d_est = d_est
        self.witness = witness
        self.sector_weights = sector_weights
        self.trials = trials

    def __iter__(self):
        # Unpacks as (d_est, witness)
        return iter((self.d_est, self.witness))

    def to_dict(self):
        return {
            'd_est': self.d_est,
            'witness': self.witness.to_string(with_sign=False) if self.witness is not None else None,
            'sector_weights': self.sector_weights,
            'trials': self.trials,
        }

    def __repr__(self):
        return f"DistanceEstimate(d_est={self.d_est}, sectors={self.sector_weights}, trials={self.trials})"


def _sector_problems(code):
    """(label, normalizer generators, opposite logicals, n_qubits, symplectic) per sector"""
    if isinstance(code, CssCode):
        n = code.n
        lz = code.logical_z_matrix().to_array()
        lx = code.logical_x_matrix().to_array()
        return [
            ('X', kernel(code.hz).to_array() if code.hz.rows else np.eye(n, dtype=bool), lz, n, False),
            ('Z', kernel(code.hx).to_array() if code.hx.rows else np.eye(n, dtype=bool), lx, n, False),
        ]
    n = code.n
    lam = lambda_form(n)
    checks = code.check_matrix()
    normalizer = kernel(checks @ lam).to_array() if checks.rows else np.eye(2 * n, dtype=bool)
    # Test against Λ·L so that a plain dot product gives the symplectic product
    logicals = (code.logical_matrix() @ lam).to_array()
    return [('XZ', normalizer, logicals, n, True)]


def _weights(rows, n, symplectic):
    if symplectic:
        return (rows[:, :n] | rows[:, n:]).sum(axis=1)
    return rows.sum(axis=1)


def _is_logical(rows, opposite):
    return ((rows.astype(np.uint8) @ opposite.T.astype(np.uint8)) & 1).any(axis=1)


def _run_stream(generators, opposite, n, symplectic, n_trials, seed_seq):
    """Run one PRNG stream of trials; returns (best weight, best row) or (inf, None)"""
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    cols = generators.shape[1]
    packed = pack_bits(generators)
    best_weight, best_row = np.inf, None
    for _ in range(n_trials):
        if symplectic:
            qubit_order = rng.permutation(n)
            order = np.concatenate([qubit_order, qubit_order + n]) if rng.random() < 0.5 else \
                np.concatenate([qubit_order + n, qubit_order])
        else:
            order = rng.permutation(cols)
        data, pivots = rref_packed(packed, cols, order)
        rows = unpack_bits(data[:len(pivots)], cols)
        if rows.shape[0] > 1:
            i, j = np.triu_indices(rows.shape[0], k=1)
            rows = np.vstack([rows, rows[i] ^ rows[j]])
        mask = _is_logical(rows, opposite)
        if not mask.any():
            continue
        candidates = rows[mask]
        weights = _weights(candidates, n, symplectic)
        idx = int(np.argmin(weights))
        if weights[idx] < best_weight:
            best_weight, best_row = int(weights[idx]), candidates[idx]
    return best_weight, best_row


def estimate_distance(code, trials=1000, seed=7, threads=1):
    """
    Estimate the minimum distance of a stabilizer code

    Args:
        code: CssCode (X and Z sectors searched separately) or StabilizerCode
        trials: Number of information sets per sector
        seed: PRNG seed; trial t always uses the same column order for a given seed
        threads: Worker threads for trial streams

    Returns:
        DistanceEstimate, unpackable as (d_est, witness). d_est is an upper bound
        on the true distance; witness is a logical operator of that weight.

    Example:
        d, witness = estimate_distance(build_csd('c422').csd, trials=1000, seed=7)
        # d == 4
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if not code.has_logicals():
        code = compute_logicals(code)
    if code.k == 0:
        logger.info("Code has no logical qubits; distance undefined")
        return DistanceEstimate(0, None, {}, trials)

    n_streams = (trials + TRIALS_PER_STREAM - 1) // TRIALS_PER_STREAM
    stream_sizes = [min(TRIALS_PER_STREAM, trials - s * TRIALS_PER_STREAM) for s in range(n_streams)]

    sector_weights = {}
    best_weight, witness = np.inf, None
    for label, generators, opposite, n, symplectic in _sector_problems(code):
        streams = np.random.SeedSequence(seed).spawn(n_streams)
        jobs = list(zip(stream_sizes, streams))

        def work(job):
            size, stream = job
            return _run_stream(generators, opposite, n, symplectic, size, stream)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(work, jobs))
        else:
            results = [work(job) for job in jobs]

        sector_best, sector_row = np.inf, None
        for weight, row in results:
            if weight < sector_best:
                sector_best, sector_row = weight, row
        sector_weights[label] = int(sector_best) if np.isfinite(sector_best) else None
        logger.debug(f"Sector {label}: best weight {sector_weights[label]} over {trials} trials")

        if sector_best < best_weight:
            best_weight = sector_best
            if symplectic:
                witness = PauliOperator.from_symplectic(BitVector.from_bits(sector_row))
            elif label == 'X':
                witness = PauliOperator.x_type(sector_row)
            else:
                witness = PauliOperator.z_type(sector_row)

    d_est = int(best_weight) if np.isfinite(best_weight) else 0
    logger.info(f"Distance estimate for {code.name or code.parameters()}: {d_est} ({trials} trials)")
    return DistanceEstimate(d_est, witness, sector_weights, trials)
