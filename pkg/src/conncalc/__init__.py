"""Biunitary connections on four-graph squares: calculus, gauge equivalence and fusion rules."""

__version__ = "0.1.0"
