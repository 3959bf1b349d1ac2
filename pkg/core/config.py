"""
###############################################################################
# SimulationConfig - Default knobs for decoding, sampling and sweeps
###############################################################################
"""

import os


class SimulationConfig:
    ###############################################################################
    # SimulationConfig - Attribute defaults shared by experiments and the CLI
    # Every report echoes to_dict() so a run can be repeated exactly
    ###############################################################################

    ENV_THREADS = 'CSD_THREADS'

    def __init__(self, name="Default Config"):
        """
        Initialize SimulationConfig

        Args:
            name: Descriptive name for this configuration
        """
        self.name = name

        # Randomness
        self.seed = 7

        # Belief propagation
        self.bp_max_iters = 30
        self.bp_scale = 0.625
        self.bp_schedule = 'layered'

        # Ordered statistics
        self.osd_order = 10

        # Prior update for suspected C4 blocks
        self.prior_boost = 10.0

        # Prep-noise proxy for Steane ancilla blocks: p′ = proxy_scale · p,
        # or tuned by bisection at proxy_tune_p when tune_proxy is set
        self.proxy_scale = 1.0
        self.tune_proxy = False
        self.proxy_tune_p = 1e-3
        self.proxy_tolerance = 0.2

        # Sampling
        self.batch_size = 4096
        self.threads = 1

        # Shot budgets per (code, p)
        self.shots_high_p = 100_000
        self.shots_low_p = 1_000_000
        self.low_p_cutoff = 1e-3

        # Physical error rates swept by default
        self.p_grid = [3e-4, 1e-3, 2e-3, 3e-3]

        # Distance estimation
        self.distance_trials = 1000

    @classmethod
    def from_env(cls, name="Environment Config"):
        """
        Build a config honouring environment overrides

        Returns:
            SimulationConfig with threads taken from CSD_THREADS when set
        """
        config = cls(name)
        raw = os.environ.get(cls.ENV_THREADS)
        if raw:
            try:
                config.threads = max(1, int(raw))
            except ValueError:
                raise ValueError(f"{cls.ENV_THREADS} must be an integer, got '{raw}'")
        return config

    def shots_for(self, p):
        """Shot budget for physical error rate p"""
        return self.shots_high_p if p >= self.low_p_cutoff else self.shots_low_p

    def update(self, **overrides):
        """
        Override attributes in place, ignoring None values

        Example:
            config.update(seed=11, osd_order=None)  # only seed changes
        """
        for key, value in overrides.items():
            if value is None:
                continue
            if not hasattr(self, key):
                raise ValueError(f"Unknown config option '{key}'")
            setattr(self, key, value)
        return self

    def to_dict(self):
        """Config echo for reports"""
        return {key: value for key, value in vars(self).items()}

    def __repr__(self):
        return f"SimulationConfig(name='{self.name}', seed={self.seed}, threads={self.threads})"
