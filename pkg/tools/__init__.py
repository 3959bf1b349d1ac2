"""
###############################################################################
# Tools - Experiments, Metrics, and Reports
###############################################################################
# Analysis layer on top of the CSD engine
#
# Modules:
# - performance: Logical error metrics (NO dependencies)
# - experiments: Prep and memory experiments (requires numpy, pandas)
# - sweeps: Grids over codes and p (requires numpy, pandas)
# - faults: Exhaustive single-fault analysis (requires numpy, pandas)
# - reporting: CSV / JSON / text export (requires pandas)
# - reproduction: Reference value checks (requires pandas, sympy)
###############################################################################
"""

# Logical error metrics - NO dependencies (always available)
from .performance import LogicalErrorMetrics

__all__ = ['LogicalErrorMetrics']

# Optional tools (require pandas/numpy)
try:
    from .experiments import ExperimentPoint, ExperimentReport, ExperimentRunner
    __all__.extend(['ExperimentPoint', 'ExperimentReport', 'ExperimentRunner'])
except ImportError:
    pass

try:
    from .sweeps import SweepRunner
    __all__.append('SweepRunner')
except ImportError:
    pass

try:
    from .faults import FaultAnalyzer, FaultReport
    __all__.extend(['FaultAnalyzer', 'FaultReport'])
except ImportError:
    pass

try:
    from .reporting import ReportGenerator
    __all__.append('ReportGenerator')
except ImportError:
    pass

try:
    from .reproduction import reproduce_tables
    __all__.append('reproduce_tables')
except ImportError:
    pass

__version__ = '1.0.0'
