"""
###############################################################################
# Performance Metrics - Logical error rate statistics
###############################################################################
"""

from .performance import LogicalErrorMetrics

__all__ = [
    'LogicalErrorMetrics',
]
