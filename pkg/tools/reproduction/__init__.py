"""
###############################################################################
# Reproduction - Reference value checks
###############################################################################
"""

from .tables import CODE_TABLE, histogram_median, reproduce_tables

__all__ = [
    'CODE_TABLE',
    'histogram_median',
    'reproduce_tables',
]
