"""Qudit toric codes coupled to thermal baths.

Builds generalized (Z_d) toric codes on an oriented torus, assembles the
Davies thermal generator for them, and computes the decay of the non-local
order parameter <X_c(t)> with exact, reduced-chain and Monte Carlo engines.
All energies are in units of the coupling J = 1.
"""

from qtoric.gpauli import PauliWord, commutation_phase, word_mul
from qtoric.lattice import OrientedLattice, build_torus
from qtoric.code import CodeInstance, build_code, theoretical_gap
from qtoric.davies import BathSpectrum

__all__ = [
    "PauliWord",
    "commutation_phase",
    "word_mul",
    "OrientedLattice",
    "build_torus",
    "CodeInstance",
    "build_code",
    "theoretical_gap",
    "BathSpectrum",
]

__version__ = "0.1.0"
