"""
Batch processing module for running the scenario x variant evaluation grid.
"""

from .batch_processor import EvaluationGridProcessor, EvaluationJob, GridConfig, build_jobs

__all__ = ['EvaluationGridProcessor', 'EvaluationJob', 'GridConfig', 'build_jobs']
