"""
###############################################################################
# SweepRunner - Experiments over codes and physical error rates
###############################################################################
"""

import logging
from itertools import product

from core.config import SimulationConfig
from core.construction import build_csd
from core.noise import NoiseModel, PrepNoiseProxy
from core.protocols import PrepPolicy
from tools.experiments import ExperimentReport, ExperimentRunner

logger = logging.getLogger(__name__)


def _constructions(codes):
    """Seed names or CsdConstructions → CsdConstructions"""
    return [build_csd(code) if isinstance(code, str) else code for code in codes]


class SweepRunner:
    ###############################################################################
    # SweepRunner - Grids of prep and memory experiments
    ###############################################################################

    def __init__(self, config=None, runner=None):
        """
        Initialize SweepRunner

        Args:
            config: SimulationConfig (p grid, shot budgets, seed)
            runner: ExperimentRunner to reuse (shares its distance cache)

        Example:
            sweeps = SweepRunner()
            report = sweeps.run_prep_sweep(['c422'], p_grid=[1e-3, 3e-3], shots=20_000)
            report.summary()
        """
        self.config = config or SimulationConfig()
        self.runner = runner or ExperimentRunner(self.config)
        self.tuned = {}

    def _shots(self, shots, p):
        return shots if shots is not None else self.config.shots_for(p)

    def run_prep_sweep(self, codes, p_grid=None, shots=None, policy=None, allow_m_values=None):
        """
        Prep experiments over every (code, p[, allow_m]) combination

        Args:
            codes: Seed names or CsdConstructions
            p_grid: Physical error rates (default: config.p_grid)
            shots: Shots per point (default: config.shots_for(p))
            policy: Base PrepPolicy
            allow_m_values: Optional list of allow_m values to sweep as well

        Returns:
            ExperimentReport of kind 'prep'
        """
        constructions = _constructions(codes)
        p_grid = list(p_grid or self.config.p_grid)
        policy = policy or PrepPolicy()
        allow_m_values = list(allow_m_values) if allow_m_values is not None else [policy.allow_m]
        report = ExperimentReport('prep', self.config)
        combinations = list(product(range(len(constructions)), range(len(p_grid)), allow_m_values))
        logger.info(f"Prep sweep: {len(combinations)} points")
        for i, j, allow_m in combinations:
            point_policy = PrepPolicy(policy.basis, allow_m, policy.use_flagcilla)
            p = p_grid[j]
            report.add(self.runner.prep_experiment(constructions[i], point_policy, NoiseModel(p),
                                                   self._shots(shots, p), seed=self.runner.point_seed(i, j, allow_m)))
        return report

    def proxy_for(self, construction, p):
        """
        Proxy used for a memory point

        Tuned at config.proxy_tune_p and scaled linearly in p when
        config.tune_proxy is set, otherwise p′ = proxy_scale · p.
        """
        model = NoiseModel(p)
        if not self.config.tune_proxy:
            return PrepNoiseProxy.for_model(model, min(1.0, self.config.proxy_scale * p))
        key = construction.csd.name or construction.csd.parameters()
        if key not in self.tuned:
            self.tuned[key] = self.tune_prep_proxy(construction, self.config.proxy_tune_p)
        scale = self.tuned[key] / self.config.proxy_tune_p
        return PrepNoiseProxy.for_model(model, min(1.0, scale * p))

    def run_memory_sweep(self, codes, p_grid=None, shots=None, rounds=None):
        """
        Memory experiments over every (code, p)

        Args:
            codes: Seed names or CsdConstructions
            p_grid: Physical error rates (default: config.p_grid)
            shots: Shots per point (default: config.shots_for(p))
            rounds: Syndrome rounds (default: each code's distance)

        Returns:
            ExperimentReport of kind 'memory'
        """
        constructions = _constructions(codes)
        p_grid = list(p_grid or self.config.p_grid)
        report = ExperimentReport('memory', self.config)
        for i, j in product(range(len(constructions)), range(len(p_grid))):
            construction, p = constructions[i], p_grid[j]
            d = rounds if rounds is not None else self.runner.distance(construction)
            report.add(self.runner.memory_experiment(construction, d, NoiseModel(p), self.proxy_for(construction, p),
                                                     self._shots(shots, p), seed=self.runner.point_seed(i, j, 1 << 20)))
        return report

    def tune_prep_proxy(self, construction, p=1e-3, shots=None, tolerance=None, max_steps=16):
        """
        Bisection on p′ so the proxy-prepared block matches the decoded ε_L of
        the full prep experiment at p

        Args:
            construction: CsdConstruction
            p: Physical error rate of the reference prep experiment
            shots: Shots per evaluation (default: config.shots_for(p))
            tolerance: Relative tolerance on ε_L (default: config.proxy_tolerance)
            max_steps: Bisection step cap

        Returns:
            float: tuned p′
        """
        shots = self._shots(shots, p)
        tolerance = self.config.proxy_tolerance if tolerance is None else tolerance
        target = self.runner.prep_experiment(construction, PrepPolicy(), NoiseModel(p), shots).epsilon
        if target == 0:
            logger.warning(f"No prep failures at p={p:.1e}; proxy strength set to 0")
            return 0.0

        def epsilon(p_prime):
            proxy = PrepNoiseProxy(p_prime, p)
            return self.runner.proxy_prep_experiment(construction, proxy, shots).epsilon()

        lo, hi = 0.0, p
        while epsilon(hi) < target and hi < 0.5:
            lo, hi = hi, min(0.5, 2 * hi)
        p_prime = hi
        for step in range(max_steps):
            p_prime = (lo * hi) ** 0.5 if lo > 0 else hi / 2
            value = epsilon(p_prime)
            logger.debug(f"Proxy bisection step {step}: p′={p_prime:.3e}, ε_L={value:.3e}, target {target:.3e}")
            if abs(value - target) <= tolerance * target:
                break
            if value < target:
                lo = p_prime
            else:
                hi = p_prime
        logger.info(f"Tuned proxy for {construction.csd.parameters()} at p={p:.1e}: p′={p_prime:.3e}")
        return p_prime
