"""
###############################################################################
# Faults - Exhaustive single-fault analysis
###############################################################################
"""

from .fault_analyzer import FaultAnalyzer, FaultReport, StabilizerCosets

__all__ = [
    'FaultAnalyzer',
    'FaultReport',
    'StabilizerCosets',
]
