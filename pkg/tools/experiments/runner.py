"""
###############################################################################
# ExperimentRunner - Noisy prep and memory experiments on CSD codes
###############################################################################
# Each experiment follows the same path:
#     protocol circuit → annotate → extract_dem → sample → decode → metrics
###############################################################################
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from core.config import SimulationConfig
from core.decoder import BpOsdDecoder, ConcatenatedDecoder, DecodingProblem
from core.distance import estimate_distance
from core.noise import NoiseModel, PrepNoiseProxy, annotate
from core.protocols import PrepPolicy, build_memory_circuit, build_prep_experiment_circuit, \
    build_proxy_prep_circuit
from core.simulation import extract_dem, sample
from tools.performance import LogicalErrorMetrics

from .report import ExperimentPoint

logger = logging.getLogger(__name__)


class ExperimentRunner:
    ###############################################################################
    # ExperimentRunner - Runs single (code, p) points
    ###############################################################################

    def __init__(self, config=None):
        """
        Initialize ExperimentRunner

        Args:
            config: SimulationConfig (seed, decoder settings, batch size, threads)

        Example:
            runner = ExperimentRunner()
            point = runner.prep_experiment(build_csd('c422'), PrepPolicy(), NoiseModel(1e-3), 10_000)
            point.metrics.summary()
        """
        self.config = config or SimulationConfig()
        self._distances = {}

    ###########################################################################
    # Helpers
    ###########################################################################

    def distance(self, construction):
        """Estimated distance of the CSD code, cached per code"""
        key = construction.csd.name or construction.csd.parameters()
        if key not in self._distances:
            estimate = estimate_distance(construction.csd, self.config.distance_trials, self.config.seed,
                                         self.config.threads)
            self._distances[key] = estimate.d_est
        return self._distances[key]

    def code_id(self, construction, distance=None):
        d = distance if distance is not None else self.distance(construction)
        return f"[[{construction.csd.n},{construction.csd.n_logicals},{d}]]"

    def point_seed(self, *labels):
        """Deterministic sampling seed for a point, derived from the config seed"""
        labels = [int(abs(label)) for label in labels]
        return int(np.random.SeedSequence([self.config.seed, *labels]).generate_state(1)[0])

    def _decode(self, make_decoder, syndromes, observables):
        """
        Decode in config.threads contiguous chunks, one decoder per chunk

        Returns:
            tuple: (failures, discarded) bool arrays in shot order
        """
        if len(syndromes) == 0:
            return np.zeros(0, dtype=bool), np.zeros(0, dtype=bool)
        chunks = np.array_split(np.arange(len(syndromes)), max(1, min(self.config.threads, len(syndromes))))

        def work(indices):
            decoder = make_decoder()
            if isinstance(decoder, ConcatenatedDecoder):
                return decoder.decode_batch(syndromes[indices], observables[indices])
            _, failures = decoder.decode_batch(syndromes[indices], observables[indices])
            return failures, np.zeros(len(indices), dtype=bool)

        if len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                results = list(pool.map(work, chunks))
        else:
            results = [work(chunks[0])]
        return np.concatenate([f for f, _ in results]), np.concatenate([d for _, d in results])

    ###########################################################################
    # Experiments
    ###########################################################################

    def prep_experiment(self, construction, policy, model, shots, seed=None, distance=None):
        """
        Noisy logical state preparation with a noiseless destructive readout

        Args:
            construction: CsdConstruction
            policy: PrepPolicy (basis, allow_m, flagcilla)
            model: NoiseModel
            shots: Number of shots
            seed: Sampling seed (default: config seed)
            distance: Code distance for the report id (estimated when omitted)

        Returns:
            ExperimentPoint; accepted shots are those with at most allow_m
            triggered postselection detectors
        """
        started = time.time()
        seed = self.config.seed if seed is None else seed
        policy = policy or PrepPolicy()
        circuit = build_prep_experiment_circuit(construction.csd, construction.layout, policy)
        dem = extract_dem(annotate(circuit, model))
        detectors, observables = sample(dem, shots, seed, self.config.batch_size)

        postselect = list(dem.postselect)
        triggered = detectors[:, postselect].sum(axis=1) if postselect else np.zeros(shots, dtype=int)
        accepted = policy.accepts(triggered)
        problem = DecodingProblem.from_dem(dem)
        failures, _ = self._decode(lambda: BpOsdDecoder(problem, self.config),
                                   detectors[accepted], observables[accepted])

        metrics = LogicalErrorMetrics(int(failures.sum()), int(accepted.sum()), construction.csd.n_logicals,
                                      kind='prep')
        point = ExperimentPoint(self.code_id(construction, distance), 'prep', model.p, shots,
                                int(accepted.sum()), metrics, seed, time.time() - started,
                                extras={'basis': policy.basis, 'allow_m': policy.allow_m, 'm': policy.m})
        logger.info(f"Prep {point.code} p={model.p:.1e}: acceptance {point.acceptance:.4f}, "
                    f"{metrics.failures} failures, ε_L={metrics.epsilon():.3e}")
        return point

    def memory_experiment(self, construction, rounds, model, proxy=None, shots=1000, seed=None,
                          update_priors=True, postselect=True, basis='Z'):
        """
        Noiseless encoding, `rounds` noisy Steane rounds with proxy-noised
        ancilla blocks, noiseless readout

        Args:
            construction: CsdConstruction
            rounds: Syndrome rounds, normally the code distance
            model: NoiseModel
            proxy: PrepNoiseProxy for the ancilla blocks (default: p′ = p)
            shots: Number of shots
            seed: Sampling seed (default: config seed)
            update_priors: Boost priors on blocks with triggered C4 detectors
            postselect: Discard shots with too many suspected blocks

        Returns:
            ExperimentPoint; ε_L is per round per logical qubit
        """
        started = time.time()
        seed = self.config.seed if seed is None else seed
        proxy = proxy or PrepNoiseProxy.for_model(model, model.p)
        code, layout = construction.csd, construction.layout
        detector_map = {}
        circuit = build_memory_circuit(code, layout, rounds, basis, detector_map=detector_map)
        dem = extract_dem(annotate(circuit, model, proxy))
        detectors, observables = sample(dem, shots, seed, self.config.batch_size)

        block_detectors = [detector_map.get(('X', b), []) + detector_map.get(('Z', b), [])
                           for b in layout.c4_rows()]
        problem = DecodingProblem.from_dem(dem)
        distance = self.distance(construction)
        failures, discarded = self._decode(
            lambda: ConcatenatedDecoder(problem, block_detectors, distance, self.config, update_priors, postselect),
            detectors, observables)

        kept = int(shots - discarded.sum())
        metrics = LogicalErrorMetrics(int(failures.sum()), kept, code.n_logicals, rounds, 'memory',
                                      int(discarded.sum()))
        point = ExperimentPoint(self.code_id(construction, distance), 'memory', model.p, shots, kept, metrics,
                                seed, time.time() - started,
                                extras={'rounds': rounds, 'p_prime': proxy.p_prime, 'basis': basis})
        logger.info(f"Memory {point.code} p={model.p:.1e}, {rounds} rounds: {metrics.failures} failures, "
                    f"{metrics.discarded} discarded, ε_L={metrics.epsilon():.3e}")
        return point

    def proxy_prep_experiment(self, construction, proxy, shots, seed=None, basis='Z'):
        """
        Logical error of a block prepared under the proxy alone

        Returns:
            LogicalErrorMetrics with the prep exponent
        """
        seed = self.config.seed if seed is None else seed
        circuit = build_proxy_prep_circuit(construction.csd, basis)
        dem = extract_dem(annotate(circuit, NoiseModel(0.0), proxy))
        detectors, observables = sample(dem, shots, seed, self.config.batch_size)
        problem = DecodingProblem.from_dem(dem)
        failures, _ = self._decode(lambda: BpOsdDecoder(problem, self.config), detectors, observables)
        return LogicalErrorMetrics(int(failures.sum()), shots, construction.csd.n_logicals, kind='prep')
