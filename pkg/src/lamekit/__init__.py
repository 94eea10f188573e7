"""
lamekit: Lamé spectral curves, elliptic covers, period matrices and theta reduction.

Exact symbolic construction of Lamé spectral curves by the finite-form ansatz,
verification and search of elliptic cover maps, numeric period matrices of the
genus-2 Lamé curve and the genus-3 Halphen curve, and Martens reduction of the
associated Riemann theta functions.
"""

__version__ = "0.1.0"
