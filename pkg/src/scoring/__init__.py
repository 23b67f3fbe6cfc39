"""
Scoring of trial batches.
"""
from .trial_scorer import TrialScorer, histogram

__all__ = ['TrialScorer', 'histogram']
