"""Closed-form initial decay rates and the crossover temperature.

The initial rate sums the pair-creation contributions of every anyon
species: Gamma_d = sum_{n=1}^{floor(d/2)} (Delta_n / 2) |c| R(Delta_n)
exp(-Delta_n beta) with Delta_n = 2(1 - cos(2 pi n / d)).  The crossover
temperature solves Gamma_d(T) = Gamma_2(T) at equal R; a finite solution
exists iff sum_n Delta_n < 4, which holds only for d = 3 (the sum is d for
odd and d + 2 for even d).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from qtoric.code import species_gap
from qtoric.davies import BathSpectrum


def gamma_closed_form(d: int, beta: float, bath: BathSpectrum, loop_len: int) -> float:
    """Initial decay rate of <X_c(t)> for a loop of `loop_len` edges."""
    if d < 2:
        raise ValueError("d must be >= 2")
    total = 0.0
    for n in range(1, d // 2 + 1):
        dn = species_gap(d, n)
        boltz = 0.0 if math.isinf(beta) else math.exp(-dn * beta)
        total += 0.5 * dn * loop_len * bath.rate(dn) * boltz
    return total


def species_gap_sum(d: int) -> float:
    return float(sum(species_gap(d, n) for n in range(1, d // 2 + 1)))


def crossover_temperature(
    d: int, bath: BathSpectrum | None = None, versus: int = 2
) -> float | None:
    """Temperature (units E_0 / k_B) where Gamma_d(T) = Gamma_versus(T).

    Rates R(Delta_n) are taken equal across the two codes (the comparison
    convention); with the default flat bath they cancel entirely.  Returns
    None when no finite crossing exists.
    """
    if d < 3:
        raise ValueError("crossover compares d >= 3 against a smaller code")
    if versus >= d:
        raise ValueError("versus must be smaller than d")
    if bath is None:
        bath = BathSpectrum(beta=1.0, rate0=1.0, rate_positive=1.0)

    def diff(beta: float) -> float:
        return gamma_closed_form(d, beta, bath, 1) - gamma_closed_form(
            versus, beta, bath, 1
        )

    # at beta -> 0 the difference tends to (sum Delta_n^(d) - sum Delta_n^(vs))/2
    if species_gap_sum(d) >= species_gap_sum(versus):
        # Gamma_d majorizes Gamma_versus at every temperature: Delta_n <= Delta_max
        # implies sum Delta_n e^{-Delta_n b} >= (sum Delta_n) e^{-Delta_max b}
        return None
    lo, hi = 1e-9, 1.0
    while diff(hi) <= 0 and hi < 1e6:
        hi *= 2.0
    if diff(hi) <= 0:
        return None
    beta_c = brentq(diff, lo, hi, xtol=1e-15, rtol=8.881784197001252e-16)
    return 1.0 / beta_c


def crossover_temperature_kelvin(e0_hz: float, d: int = 3, versus: int = 2) -> float | None:
    """Crossover temperature in Kelvin for a physical energy scale E_0 = h * f.

    With f ~ 100 kHz this lands near 20 microkelvin.
    """
    from scipy.constants import h, k as k_b

    tc = crossover_temperature(d, versus=versus)
    if tc is None:
        return None
    return tc * h * e0_hz / k_b


def gamma_table(ds: list[int], beta: float, bath: BathSpectrum, loop_len: int) -> dict[int, float]:
    return {d: gamma_closed_form(d, beta, bath, loop_len) for d in ds}
