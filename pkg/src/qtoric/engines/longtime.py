"""Long-time behaviour: Gibbs expectation, relaxation rates, curve tails."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qtoric.code import CodeInstance
from qtoric.davies import BathSpectrum, gibbs_state
from qtoric.engines.analytic import gamma_closed_form
from qtoric.engines.reduced import ReducedGenerator


@dataclass(frozen=True)
class LongTimeReport:
    gibbs_expectation: complex  # Tr[X_c rho_beta], zero for a logical loop
    chain_kernel_dimension: int  # phase-free reduced chain (ergodicity)
    slowest_decay_rate: float  # -max Re eigenvalue of the phased generator
    tail_magnitude: float  # |<X_c(t)>| at t = horizon / Gamma
    horizon: float


def long_time_limit(
    ci: CodeInstance, bath: BathSpectrum, horizon: float = 20.0
) -> LongTimeReport:
    """Confirm decay to the (vanishing) Gibbs value of the order parameter."""
    rho = gibbs_state(ci, bath.beta)
    xc = ci.logical_x_word().to_sparse(ci.n_edges)
    expect = rho.expectation(xc)
    red = ReducedGenerator(ci, bath)
    kernel_dim = red.phase_free_kernel_dimension()
    slowest = red.slowest_decay_rate()
    gamma = gamma_closed_form(ci.d, bath.beta, bath, ci.loop_x.length)
    t_end = horizon / gamma
    tail = abs(red.curve(np.array([t_end])).values[0])
    return LongTimeReport(
        gibbs_expectation=expect,
        chain_kernel_dimension=kernel_dim,
        slowest_decay_rate=slowest,
        tail_magnitude=float(tail),
        horizon=float(t_end),
    )
