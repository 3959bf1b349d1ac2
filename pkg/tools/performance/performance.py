"""
###############################################################################
# Logical Error Metrics - Failure rates and their uncertainty
###############################################################################
"""

import math


class LogicalErrorMetrics:
    ###############################################################################
    # Logical Error Metrics - p_L, ε_L and error bars for one (code, p) point
    # Works for both experiment kinds: prep (per prepared state) and memory
    # (per round)
    ###############################################################################

    KINDS = ('prep', 'memory')

    def __init__(self, failures, shots, n_logicals, rounds=1, kind='memory', discarded=0):
        """
        Initialize Logical Error Metrics

        Args:
            failures: Number of decoded shots with a wrong logical prediction
            shots: Number of decoded (accepted, not discarded) shots
            n_logicals: Number of logical qubits K of the code
            rounds: Syndrome rounds d (memory only)
            kind: 'prep' or 'memory'
            discarded: Shots dropped by postselection after acceptance
        """
        if kind not in self.KINDS:
            raise ValueError(f"kind must be one of {self.KINDS}, got '{kind}'")
        if shots < 0 or not 0 <= failures <= max(shots, 0):
            raise ValueError(f"Need 0 <= failures <= shots, got {failures}/{shots}")
        if n_logicals < 1 or rounds < 1:
            raise ValueError(f"n_logicals and rounds must be positive, got {n_logicals}, {rounds}")
        self.failures = int(failures)
        self.shots = int(shots)
        self.n_logicals = n_logicals
        self.rounds = rounds
        self.kind = kind
        self.discarded = int(discarded)

    ###########################################################################
    # Rates
    ###########################################################################

    @property
    def exponent(self):
        """1/(K·d) for memory, 1/K for prep"""
        if self.kind == 'memory':
            return 1.0 / (self.n_logicals * self.rounds)
        return 1.0 / self.n_logicals

    def p_logical(self):
        """
        Shot failure rate

        Returns:
            float: failures / shots (0.0 without shots)
        """
        if self.shots == 0:
            return 0.0
        return self.failures / self.shots

    def _transform(self, p_l):
        return 1.0 - (1.0 - p_l) ** self.exponent

    def epsilon(self):
        """Logical error rate per logical qubit (and per round for memory)"""
        return self._transform(self.p_logical())

    def p_logical_stddev(self):
        """Binomial standard deviation of p_L"""
        if self.shots == 0:
            return 0.0
        p_l = self.p_logical()
        return math.sqrt(p_l * (1.0 - p_l) / self.shots)

    def epsilon_stddev(self):
        """
        σ(ε_L) by the delta method

        dε/dp_L = exponent · (1 - p_L)^(exponent - 1)
        """
        p_l = self.p_logical()
        if p_l >= 1.0:
            return 0.0
        slope = self.exponent * (1.0 - p_l) ** (self.exponent - 1.0)
        return slope * self.p_logical_stddev()

    def p_logical_upper_bound(self):
        """
        95% upper bound on p_L

        With zero failures the rule of three (3/shots) applies, otherwise
        p_L + 2σ.
        """
        if self.shots == 0:
            return 1.0
        if self.failures == 0:
            return min(1.0, 3.0 / self.shots)
        return min(1.0, self.p_logical() + 2 * self.p_logical_stddev())

    def epsilon_upper_bound(self):
        return self._transform(self.p_logical_upper_bound())

    def is_resolved(self, min_failures=100):
        """Enough failures observed for the point estimate to be trusted"""
        return self.failures >= min_failures

    ###########################################################################
    # Export
    ###########################################################################

    def to_dict(self):
        return {
            'shots': self.shots,
            'failures': self.failures,
            'discarded': self.discarded,
            'p_L': self.p_logical(),
            'p_L_stddev': self.p_logical_stddev(),
            'epsilon_L': self.epsilon(),
            'epsilon_L_stddev': self.epsilon_stddev(),
            'epsilon_L_upper': self.epsilon_upper_bound(),
        }

    def summary(self):
        """Display the metrics"""
        print("=" * 80)
        print(f"LOGICAL ERROR METRICS ({self.kind}, K={self.n_logicals}, rounds={self.rounds})")
        print("=" * 80)
        print(f"  Decoded Shots:          {self.shots:>15,}")
        print(f"  Failures:               {self.failures:>15,}")
        print(f"  Discarded:              {self.discarded:>15,}")
        print(f"  p_L:                    {self.p_logical():>15.3e} ± {self.p_logical_stddev():.1e}")
        print(f"  ε_L:                    {self.epsilon():>15.3e} ± {self.epsilon_stddev():.1e}")
        print(f"  ε_L (95% upper):        {self.epsilon_upper_bound():>15.3e}")
        print("=" * 80)

    def __repr__(self):
        return f"LogicalErrorMetrics({self.kind}, failures={self.failures}/{self.shots}, ε_L={self.epsilon():.3e})"
