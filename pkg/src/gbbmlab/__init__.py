"""Numerical laboratory for the quartic generalized BBM equation.

Subpackages cover the linBBM dispersion relation and its group-velocity
geometry, Littlewood-Paley projections, the four-wave resonance census,
direct oscillatory-integral evaluation of the linear flow, a pseudo-spectral
solver for the nonlinear Cauchy problem, and decay/scattering diagnostics.
"""

__version__ = "0.1.0"
