"""Size caps and shared numerical tolerances.

Dense realizations and superoperator assembly refuse politely above these
caps instead of exhausting memory; callers are pointed at the sparse or
reduced-engine code paths.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SizeCaps:
    # max number of entries of a dense operator (D x D)
    dense_entries: int = 2**26
    # max Hilbert dimension for assembling a sparse superoperator matrix
    superop_dim: int = 1024
    # max number of reduced charge-chain states kept as a dense generator
    reduced_dense_states: int = 2048
    # max number of reduced charge-chain states overall (sparse)
    reduced_states: int = 2_000_000


DEFAULT_CAPS = SizeCaps()

# grouping tolerance for Bohr frequencies, J = 1 units
BOHR_TOL = 1e-9


class SizeCapError(RuntimeError):
    """Raised when a dense/superoperator construction exceeds the caps."""
