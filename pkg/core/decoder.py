"""
###############################################################################
# Decoder - Min-sum belief propagation with ordered-statistics fallback
###############################################################################
# Works on a DecodingProblem: check matrix H (detectors x mechanisms), prior
# probabilities, and observable matrix L (observables x mechanisms).
#
# bp():   layered min-sum; checks are coloured greedily so that no two checks
#         of a layer share a mechanism, and every layer updates vectorized.
# osd():  exact solve on the most likely-to-flip columns (OSD-0), then an
#         exhaustive search over the λ least reliable non-pivot columns.
###############################################################################
"""

import logging

import numpy as np

from .config import SimulationConfig
from .exceptions import InconsistentSyndromeError
from .f2 import pack_bits, rref_packed, unpack_bits

logger = logging.getLogger(__name__)

# Message magnitude clip (LLR units)
MAX_LLR = 50.0


class DecodingProblem:
    ###############################################################################
    # DecodingProblem - H, priors and L of a detector error model
    ###############################################################################

    def __init__(self, h, priors, observables):
        """
        Initialize DecodingProblem

        Args:
            h: (detectors, mechanisms) 0/1 array
            priors: Mechanism probabilities in (0, 0.5]
            observables: (observables, mechanisms) 0/1 array
        """
        self.h = np.asarray(h, dtype=bool)
        self.priors = np.asarray(priors, dtype=float)
        self.observables = np.asarray(observables, dtype=bool)
        if self.observables.ndim == 1 or self.observables.size == 0:
            self.observables = self.observables.reshape(-1, self.h.shape[1])
        if self.priors.shape != (self.h.shape[1],) or self.observables.shape[1] != self.h.shape[1]:
            raise ValueError(f"Column counts differ: H {self.h.shape}, priors {self.priors.shape}, "
                             f"L {self.observables.shape}")
        if self.priors.size and (self.priors.min() <= 0 or self.priors.max() > 0.5):
            raise ValueError("Priors must lie in (0, 0.5]")
        self._layers = None

    @classmethod
    def from_dem(cls, dem):
        return cls(dem.check_matrix(), dem.priors(), dem.observable_matrix())

    @property
    def n_detectors(self):
        return self.h.shape[0]

    @property
    def n_mechanisms(self):
        return self.h.shape[1]

    def with_priors(self, priors):
        problem = DecodingProblem(self.h, priors, self.observables)
        problem._layers = self._layers
        return problem

    def weights(self):
        """Prior log-likelihood cost of each mechanism, log((1-p)/p)"""
        return np.log((1 - self.priors) / self.priors)

    def syndrome_of(self, estimate):
        return (self.h.astype(np.uint8) @ np.asarray(estimate, dtype=np.uint8)) % 2 == 1

    def observables_of(self, estimate):
        return (self.observables.astype(np.uint8) @ np.asarray(estimate, dtype=np.uint8)) % 2 == 1

    def layers(self):
        """Edge groups of the layered schedule: list of (checks, vars, group offsets)"""
        if self._layers is None:
            self._layers = _colour_checks(self.h)
        return self._layers

    def __repr__(self):
        return f"DecodingProblem(detectors={self.n_detectors}, mechanisms={self.n_mechanisms})"


class DecodeOutcome:
    ###############################################################################
    # DecodeOutcome - Decoder verdict for one syndrome
    ###############################################################################

    def __init__(self, estimate, observables, converged, postselected=False, consistent=True, weight=0.0):
        self.estimate = estimate
        self.observables = observables
        self.converged = converged
        self.postselected = postselected
        self.consistent = consistent
        self.weight = weight

    def __repr__(self):
        return (f"DecodeOutcome(weight={self.estimate.sum() if self.estimate is not None else None}, "
                f"converged={self.converged}, consistent={self.consistent})")


###############################################################################
# Belief propagation
###############################################################################

def _colour_checks(h):
    """Greedy colouring: checks sharing a mechanism get different layers"""
    m = h.shape[0]
    check_vars = [np.flatnonzero(h[c]) for c in range(m)]
    var_colours = [set() for _ in range(h.shape[1])]
    colour_of = np.zeros(m, dtype=int)
    for c in range(m):
        taken = set().union(*(var_colours[v] for v in check_vars[c])) if len(check_vars[c]) else set()
        colour = 0
        while colour in taken:
            colour += 1
        colour_of[c] = colour
        for v in check_vars[c]:
            var_colours[v].add(colour)
    layers = []
    for colour in range(colour_of.max() + 1 if m else 0):
        checks, variables, offsets = [], [], []
        for c in np.flatnonzero(colour_of == colour):
            if not len(check_vars[c]):
                continue
            offsets.append(len(variables))
            checks.append(c)
            variables.extend(check_vars[c])
        if checks:
            layers.append((np.array(checks), np.array(variables), np.array(offsets)))
    return layers


def bp(problem, syndrome, max_iters=30, scale=0.625):
    """
    Scaled min-sum belief propagation, layered schedule

    Args:
        problem: DecodingProblem
        syndrome: Detector bits (length = detector count)
        max_iters: Iteration cap
        scale: Min-sum scaling factor

    Returns:
        tuple: (posterior LLRs, hard estimate, converged flag)

    Example:
        llr, estimate, ok = bp(problem, np.zeros(problem.n_detectors, bool))   # ok is True
    """
    syndrome = np.asarray(syndrome, dtype=bool)
    if syndrome.shape != (problem.n_detectors,):
        raise ValueError(f"Syndrome length {syndrome.size} does not match {problem.n_detectors} detectors")
    prior_llr = problem.weights()
    posterior = prior_llr.copy()
    estimate = posterior < 0
    if not syndrome.any():
        return posterior, np.zeros(problem.n_mechanisms, dtype=bool), True
    layers = problem.layers()
    messages = [np.zeros(len(variables)) for _, variables, _ in layers]
    for iteration in range(max_iters):
        for (checks, variables, offsets), r in zip(layers, messages):
            q = posterior[variables] - r
            negative = q < 0
            magnitude = np.abs(q)
            sizes = np.diff(np.append(offsets, len(variables)))
            parity = (np.add.reduceat(negative.astype(int), offsets) + syndrome[checks]) % 2
            min1 = np.minimum.reduceat(magnitude, offsets)
            min1_edge = np.repeat(min1, sizes)
            is_min = magnitude == min1_edge
            masked = np.where(is_min, np.inf, magnitude)
            min2 = np.minimum.reduceat(masked, offsets)
            ties = np.add.reduceat(is_min.astype(int), offsets) > 1
            min2 = np.where(ties, min1, min2)
            other_min = np.where(is_min, np.repeat(min2, sizes), min1_edge)
            sign = np.where((np.repeat(parity, sizes) + negative) % 2 == 1, -1.0, 1.0)
            new = scale * sign * np.minimum(other_min, MAX_LLR)
            np.add.at(posterior, variables, new - r)
            r[:] = new
        estimate = posterior < 0
        if np.array_equal(problem.syndrome_of(estimate), syndrome):
            logger.debug(f"BP converged after {iteration + 1} iterations")
            return posterior, estimate, True
    return posterior, estimate, False


###############################################################################
# Ordered statistics
###############################################################################

def osd(problem, syndrome, posteriors, order=10):
    """
    Ordered-statistics decoding

    Args:
        problem: DecodingProblem
        syndrome: Detector bits
        posteriors: Posterior LLRs from bp (low = likely flipped)
        order: λ, number of least-reliable non-pivot columns searched exhaustively

    Returns:
        np.ndarray: estimate e with H·e = syndrome exactly

    Raises:
        ValueError: if order < 0
        InconsistentSyndromeError: when the syndrome is outside the column space of H
    """
    if order < 0:
        raise ValueError(f"OSD order must be non-negative, got {order}")
    syndrome = np.asarray(syndrome, dtype=bool)
    m, n = problem.h.shape
    estimate = np.zeros(n, dtype=bool)
    if not syndrome.any():
        return estimate
    # Stable sort: ties broken by column index
    ranking = np.argsort(np.asarray(posteriors, dtype=float), kind='stable')
    augmented = pack_bits(np.hstack([problem.h, syndrome.reshape(-1, 1)]))
    data, pivots = rref_packed(augmented, n + 1, col_order=ranking)
    reduced = unpack_bits(data, n + 1)
    rank = len(pivots)
    if reduced[rank:, n].any():
        raise InconsistentSyndromeError("Syndrome is not in the column space of the check matrix")
    target = reduced[:rank, n]
    pivots = np.array(pivots, dtype=int)
    estimate[pivots] = target
    if order == 0:
        return estimate

    pivot_set = set(pivots.tolist())
    candidates = np.array([c for c in ranking if c not in pivot_set][:order], dtype=int)
    if candidates.size == 0:
        return estimate
    weights = problem.weights()
    patterns = ((np.arange(1 << candidates.size)[:, None] >> np.arange(candidates.size)) & 1).astype(np.uint8)
    columns = reduced[:rank][:, candidates].astype(np.uint8)
    pivot_bits = (target.astype(np.uint8)[None, :] + patterns @ columns.T) % 2
    costs = pivot_bits @ weights[pivots] + patterns @ weights[candidates]
    best = int(np.argmin(costs))
    estimate[:] = False
    estimate[pivots] = pivot_bits[best].astype(bool)
    estimate[candidates] = patterns[best].astype(bool)
    return estimate


###############################################################################
# Decoder front end
###############################################################################

class BpOsdDecoder:
    ###############################################################################
    # BpOsdDecoder - BP first, OSD when BP does not reproduce the syndrome
    # Outcomes are cached per distinct syndrome
    ###############################################################################

    def __init__(self, problem, config=None, backend='native'):
        """
        Initialize BpOsdDecoder

        Args:
            problem: DecodingProblem
            config: SimulationConfig for iterations, scaling and OSD order
            backend: 'native', or 'ldpc' to use ldpc's bposd_decoder when installed
        """
        self.problem = problem
        self.config = config or SimulationConfig()
        self.backend = backend
        self._cache = {}
        self._external = None
        if backend == 'ldpc':
            self._external = self._build_ldpc()
        elif backend != 'native':
            raise ValueError(f"Unknown decoder backend '{backend}'")

    def _build_ldpc(self):
        try:
            from ldpc import bposd_decoder
        except ImportError:
            logger.warning("ldpc is not installed; falling back to the native decoder")
            self.backend = 'native'
            return None
        return bposd_decoder(
            self.problem.h.astype(np.uint8),
            channel_probs=self.problem.priors,
            max_iter=self.config.bp_max_iters,
            bp_method="ms",
            ms_scaling_factor=self.config.bp_scale,
            osd_method="osd_cs" if self.config.osd_order else "osd_0",
            osd_order=self.config.osd_order,
            input_vector_type="syndrome",
        )

    def decode(self, syndrome):
        """Decode one syndrome; inconsistent syndromes give consistent=False"""
        syndrome = np.asarray(syndrome, dtype=bool)
        key = np.packbits(syndrome).tobytes()
        if key in self._cache:
            return self._cache[key]
        if self._external is not None:
            estimate = np.asarray(self._external.decode(syndrome.astype(np.uint8)), dtype=bool)
            converged = bool(self._external.converge)
            consistent = True
        else:
            posterior, estimate, converged = bp(self.problem, syndrome, self.config.bp_max_iters,
                                                self.config.bp_scale)
            consistent = True
            if not converged:
                try:
                    estimate = osd(self.problem, syndrome, posterior, self.config.osd_order)
                except InconsistentSyndromeError:
                    logger.debug("Inconsistent syndrome; counted as a failure")
                    estimate, consistent = None, False
        if consistent:
            outcome = DecodeOutcome(estimate, self.problem.observables_of(estimate), converged,
                                    weight=float(self.problem.weights()[estimate].sum()))
        else:
            outcome = DecodeOutcome(None, None, converged, consistent=False)
        self._cache[key] = outcome
        return outcome

    def decode_batch(self, syndromes, observables=None):
        """
        Decode many shots

        Args:
            syndromes: (shots, detectors) bool array
            observables: Optional (shots, observables) actual flips

        Returns:
            tuple: (predicted observable flips (shots, O), failures (shots,) or None)
        """
        syndromes = np.asarray(syndromes, dtype=bool)
        n_obs = self.problem.observables.shape[0]
        predictions = np.zeros((len(syndromes), n_obs), dtype=bool)
        inconsistent = np.zeros(len(syndromes), dtype=bool)
        for shot, syndrome in enumerate(syndromes):
            outcome = self.decode(syndrome)
            if outcome.consistent:
                predictions[shot] = outcome.observables
            else:
                inconsistent[shot] = True
        logger.debug(f"Decoded {len(syndromes)} shots, {len(self._cache)} distinct syndromes cached")
        if observables is None:
            return predictions, None
        failures = (predictions != np.asarray(observables, dtype=bool)).any(axis=1) | inconsistent
        return predictions, failures


def maximum_likelihood(problem, syndrome):
    """
    Exhaustive minimum-cost estimate (for small problems)

    Returns:
        np.ndarray or None when no pattern matches the syndrome
    """
    n = problem.n_mechanisms
    if n > 24:
        raise ValueError(f"Exhaustive search limited to 24 mechanisms, got {n}")
    syndrome = np.asarray(syndrome, dtype=bool)
    patterns = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(np.uint8)
    matches = ((patterns @ problem.h.T.astype(np.uint8)) % 2 == syndrome).all(axis=1)
    if not matches.any():
        return None
    costs = np.where(matches, patterns @ problem.weights(), np.inf)
    return patterns[int(np.argmin(costs))].astype(bool)


###############################################################################
# Concatenation-aware heuristics
###############################################################################

def triggered_blocks(detector_bits, block_detectors):
    """
    Blocks with a triggered C4 detector

    Args:
        detector_bits: (detectors,) or (shots, detectors) bool array
        block_detectors: List, per C4 block, of that block's detector indices
    """
    detector_bits = np.asarray(detector_bits, dtype=bool)
    columns = [detector_bits[..., list(dets)].any(axis=-1) if len(dets) else
               np.zeros(detector_bits.shape[:-1], dtype=bool) for dets in block_detectors]
    return np.stack(columns, axis=-1) if columns else np.zeros(detector_bits.shape[:-1] + (0,), dtype=bool)


def prior_update(problem, c4_bits, block_detectors, boost=10.0):
    """
    Raise the priors of mechanisms touching suspected C4 blocks

    Args:
        problem: DecodingProblem
        c4_bits: Per-block bool, True where the block's C4 syndrome is -1
        block_detectors: List, per block, of the detector indices of its C4 checks
        boost: Multiplicative factor on the touched priors

    Returns:
        np.ndarray: updated priors clipped into (0, 0.5]
    """
    c4_bits = np.asarray(c4_bits, dtype=bool)
    priors = problem.priors.copy()
    touched = np.zeros(problem.n_mechanisms, dtype=bool)
    for block in np.flatnonzero(c4_bits):
        dets = list(block_detectors[block])
        if dets:
            touched |= problem.h[dets].any(axis=0)
    priors[touched] = np.minimum(priors[touched] * boost, 0.5)
    return priors


def heavy_postselect(c4_bits, d):
    """True (discard) iff at least ⌊(d-1)/2⌋ + 1 C4 blocks report a -1 syndrome"""
    threshold = (d - 1) // 2 + 1
    return int(np.count_nonzero(c4_bits)) >= threshold


class ConcatenatedDecoder:
    ###############################################################################
    # ConcatenatedDecoder - BP+OSD with C4-block prior updates and heavy-error
    # postselection. Both depend only on the syndrome, so outcomes are cached
    ###############################################################################

    def __init__(self, problem, block_detectors, distance, config=None, update_priors=True, postselect=True):
        """
        Initialize ConcatenatedDecoder

        Args:
            problem: DecodingProblem
            block_detectors: Per C4 block, the detector indices of its checks
            distance: Code distance d for the postselection threshold
            config: SimulationConfig (prior_boost, BP and OSD settings)
            update_priors: Boost priors of mechanisms on suspected blocks
            postselect: Discard shots with ⌊(d-1)/2⌋ + 1 or more suspected blocks
        """
        self.problem = problem
        self.block_detectors = [list(dets) for dets in block_detectors]
        self.distance = distance
        self.config = config or SimulationConfig()
        self.update_priors = update_priors
        self.postselect = postselect
        self._base = BpOsdDecoder(problem, self.config)
        self._cache = {}

    def decode(self, syndrome):
        syndrome = np.asarray(syndrome, dtype=bool)
        key = np.packbits(syndrome).tobytes()
        if key in self._cache:
            return self._cache[key]
        c4_bits = triggered_blocks(syndrome, self.block_detectors)
        if self.postselect and heavy_postselect(c4_bits, self.distance):
            outcome = DecodeOutcome(None, None, False, postselected=True)
        elif self.update_priors and c4_bits.any():
            priors = prior_update(self.problem, c4_bits, self.block_detectors, self.config.prior_boost)
            outcome = BpOsdDecoder(self.problem.with_priors(priors), self.config).decode(syndrome)
        else:
            outcome = self._base.decode(syndrome)
        self._cache[key] = outcome
        return outcome

    def decode_batch(self, syndromes, observables):
        """
        Returns:
            tuple: (failures (shots,), discarded (shots,)); discarded shots never count as failures
        """
        syndromes = np.asarray(syndromes, dtype=bool)
        observables = np.asarray(observables, dtype=bool)
        failures = np.zeros(len(syndromes), dtype=bool)
        discarded = np.zeros(len(syndromes), dtype=bool)
        for shot, syndrome in enumerate(syndromes):
            outcome = self.decode(syndrome)
            if outcome.postselected:
                discarded[shot] = True
            elif not outcome.consistent:
                failures[shot] = True
            else:
                failures[shot] = bool((outcome.observables != observables[shot]).any())
        logger.debug(f"Decoded {len(syndromes)} shots: {failures.sum()} failures, {discarded.sum()} discarded")
        return failures, discarded
