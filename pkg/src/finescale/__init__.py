"""Fine-scale statistics of real-valued vector sequences.

Counting kernels and seeded Monte Carlo estimators for pair correlation
on the unit torus, additive energies, Diophantine-inequality solution
counts, and smoothed-window moments, plus an experiment layer that fits
growth exponents against the thresholds under test.
"""

__version__ = "0.1.0"
