"""Adaptive line enhancer noise-cancellation benchmark: LMS vs GA vs PSO."""

__version__ = "0.1.0"
