"""Thermodynamic formalism for B-free hereditary subshifts, at desk scale.

Subpackages: ``bset`` (validated truncations of B and densities), ``words``
(language enumeration), ``measures`` (certified cylinder measures), ``thermo``
(pressure, entropy, equilibrium parameters, non-Gibbs certificates),
``odometer`` (the group rotation and Monte Carlo cross-checks) and ``cli``.
"""

from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
