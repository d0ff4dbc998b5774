"""mixturecalc - Mixture algebra on complex quaternions, its covariant calculus, and physics verification suites."""

__version__ = "0.1.0"
