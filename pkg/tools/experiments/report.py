"""
###############################################################################
# ExperimentReport - Per-point results of prep and memory experiments
###############################################################################
"""

import pandas as pd


class ExperimentPoint:
    ###############################################################################
    # ExperimentPoint - One (code, p) run: acceptance plus decoded metrics
    ###############################################################################

    def __init__(self, code, kind, p, shots, accepted, metrics, seed, runtime, extras=None):
        """
        Initialize ExperimentPoint

        Args:
            code: Code id, e.g. '[[16,4,4]]'
            kind: 'prep' or 'memory'
            p: Physical error rate
            shots: Sampled shots
            accepted: Shots surviving postselection before decoding
            metrics: LogicalErrorMetrics of the decoded shots
            seed: Sampling seed
            runtime: Seconds spent on the point
            extras: Additional columns (policy, rounds, proxy strength)
        """
        self.code = code
        self.kind = kind
        self.p = p
        self.shots = shots
        self.accepted = accepted
        self.metrics = metrics
        self.seed = seed
        self.runtime = runtime
        self.extras = dict(extras or {})

    @property
    def acceptance(self):
        return self.accepted / self.shots if self.shots else 0.0

    @property
    def epsilon(self):
        return self.metrics.epsilon()

    def to_dict(self):
        row = {'code': self.code, 'kind': self.kind, 'p': self.p, 'shots': self.shots,
               'accepted': self.accepted, 'acceptance': self.acceptance}
        row.update({key: value for key, value in self.metrics.to_dict().items() if key != 'shots'})
        row['decoded'] = self.metrics.shots
        row.update(self.extras)
        row['seed'] = self.seed
        row['runtime_s'] = self.runtime
        return row

    def __repr__(self):
        return (f"ExperimentPoint({self.code}, {self.kind}, p={self.p}, acceptance={self.acceptance:.4f}, "
                f"ε_L={self.epsilon:.3e})")


class ExperimentReport:
    ###############################################################################
    # ExperimentReport - Collection of points with the config they ran under
    ###############################################################################

    def __init__(self, kind, config=None):
        """
        Initialize ExperimentReport

        Args:
            kind: 'prep' or 'memory'
            config: SimulationConfig echoed into exports
        """
        self.kind = kind
        self.config = config
        self.points = []

    def add(self, point):
        self.points.append(point)
        return point

    @property
    def codes(self):
        return list(dict.fromkeys(point.code for point in self.points))

    @property
    def p_grid(self):
        return sorted({point.p for point in self.points})

    @property
    def seeds(self):
        return [point.seed for point in self.points]

    @property
    def runtime(self):
        return sum(point.runtime for point in self.points)

    def point(self, code, p, **extras):
        """
        The point for a code and p (and matching extras such as allow_m)

        Raises:
            KeyError: when no point matches
        """
        for point in self.points:
            if point.code == code and point.p == p and all(point.extras.get(k) == v for k, v in extras.items()):
                return point
        raise KeyError(f"No {self.kind} point for {code} at p={p} with {extras}")

    def to_dataframe(self):
        """
        Returns:
            DataFrame with one row per point
        """
        return pd.DataFrame([point.to_dict() for point in self.points])

    def to_dict(self):
        return {
            'kind': self.kind,
            'codes': self.codes,
            'p_grid': self.p_grid,
            'runtime_s': self.runtime,
            'seeds': self.seeds,
            'config': self.config.to_dict() if self.config is not None else {},
            'points': [point.to_dict() for point in self.points],
        }

    def summary(self):
        """Display per-point results"""
        print("=" * 80)
        print(f"{self.kind.upper()} EXPERIMENT REPORT")
        print("=" * 80)
        for code in self.codes:
            print(f"\n{code}:")
            print("-" * 80)
            print(f"  {'p':>10} {'shots':>10} {'accept':>8} {'fail':>8} {'ε_L':>11} {'σ':>9}")
            for point in self.points:
                if point.code != code:
                    continue
                m = point.metrics
                print(f"  {point.p:>10.1e} {point.shots:>10,} {point.acceptance:>8.4f} {m.failures:>8,} "
                      f"{m.epsilon():>11.3e} {m.epsilon_stddev():>9.1e}")
        print(f"\nRuntime: {self.runtime:.1f}s")
        print("=" * 80)

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"ExperimentReport({self.kind}, codes={self.codes}, points={len(self.points)})"
