"""
###############################################################################
# Sweeps - Parameter grids over codes and noise strengths
###############################################################################
"""

from .sweep_runner import SweepRunner

__all__ = [
    'SweepRunner',
]
