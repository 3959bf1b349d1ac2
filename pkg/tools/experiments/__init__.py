"""
###############################################################################
# Experiments - Noisy prep and memory runs
###############################################################################
"""

from .report import ExperimentPoint, ExperimentReport
from .runner import ExperimentRunner

__all__ = [
    'ExperimentPoint',
    'ExperimentReport',
    'ExperimentRunner',
]
