"""Evolution engines for the order parameter <X_c(t)>.

Three routes with overlapping validity: exact Lindblad propagation (tiny
systems), the exact reduced charge-chain with phase weights (small systems),
and continuous-time Monte Carlo (large systems), plus closed-form rates and
the crossover temperature.
"""

from qtoric.engines.curve import DecayCurve
from qtoric.engines.analytic import (
    gamma_closed_form,
    crossover_temperature,
    crossover_temperature_kelvin,
)
from qtoric.engines.reduced import ReducedGenerator, reduced_generator, reduced_curve
from qtoric.engines.mc import mc_curve, kernel_backend
from qtoric.engines.exact import exact_curve
from qtoric.engines.fitting import fit_initial_rate
from qtoric.engines.longtime import long_time_limit

__all__ = [
    "DecayCurve",
    "gamma_closed_form",
    "crossover_temperature",
    "crossover_temperature_kelvin",
    "ReducedGenerator",
    "reduced_generator",
    "reduced_curve",
    "mc_curve",
    "kernel_backend",
    "exact_curve",
    "fit_initial_rate",
    "long_time_limit",
]
