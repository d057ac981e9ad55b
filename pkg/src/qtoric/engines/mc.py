"""Continuous-time Monte Carlo engine (stochastic unravelling of the
reduced chain).

Trajectories of the phase-free classical chain start from the trivial
configuration; each jump on a loop edge multiplies the trajectory weight by
a d-th root of unity, and the estimator is the trial mean of the weights at
each requested time.  Trials use counter-based splitmix64 streams derived
from the master seed: results are deterministic given (seed, trials, times)
and independent of execution order or worker count (fixed-size chunks,
reduced in index order).

The inner loop runs in the compiled kernel ``qtoric._ctmc`` when available,
falling back to the bit-identical pure-Python implementation.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from qtoric.code import CodeInstance
from qtoric.davies import BathSpectrum, transition_rate_table
from qtoric.engines.curve import DecayCurve
from qtoric.gpauli import commutation_phase
from qtoric.processes import edge_sites, error_word

try:  # compiled extension, optional at runtime
    from qtoric import _ctmc as _kernel

    _BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    from qtoric import _ctmc_py as _kernel

    _BACKEND = "python"

from qtoric import _ctmc_py as _kernel_py

CHUNK = 4096


def kernel_backend() -> str:
    """'compiled' when the Cython kernel is importable, else 'python'."""
    return _BACKEND


def _move_tables(ci: CodeInstance):
    """Flat move arrays: every (edge, sector, power) jump channel."""
    d = ci.d
    xc = ci.logical_x_word()
    sec_id = {"z": 0, "x": 1}
    mv_sector, mv_a, mv_b, mv_m, mv_phase = [], [], [], [], []
    for edge in range(ci.n_edges):
        for sector in ("z", "x"):
            lose, gain = edge_sites(ci, edge, sector)
            for m in range(1, d):
                gamma = commutation_phase(error_word(d, edge, m, sector), xc)
                mv_sector.append(sec_id[sector])
                mv_a.append(lose)
                mv_b.append(gain)
                mv_m.append(m)
                mv_phase.append((-gamma) % d)  # Heisenberg weight exponent
    return (
        np.asarray(mv_sector, dtype=np.int8),
        np.asarray(mv_a, dtype=np.int32),
        np.asarray(mv_b, dtype=np.int32),
        np.asarray(mv_m, dtype=np.int8),
        np.asarray(mv_phase, dtype=np.int8),
    )


def mc_curve(
    ci: CodeInstance,
    bath: BathSpectrum,
    times,
    trials: int,
    seed: int,
    backend: str | None = None,
) -> DecayCurve:
    """Monte Carlo estimate of <X_c(t)> with per-point standard errors."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    times = np.ascontiguousarray(np.sort(np.asarray(times, dtype=float)))
    if len(times) and times[0] < 0:
        raise ValueError("times must be nonnegative")
    d = ci.d
    mv_sector, mv_a, mv_b, mv_m, mv_phase = _move_tables(ci)
    rate_flat = np.ascontiguousarray(transition_rate_table(d, bath).reshape(-1))
    ang = 2.0 * np.pi * np.arange(d) / d
    cosw = np.ascontiguousarray(np.cos(ang))
    sinw = np.ascontiguousarray(np.sin(ang))
    n_v = ci.lat.n_vertices
    n_p = ci.lat.n_plaquettes
    nt = len(times)

    if backend is None:
        kern = _kernel
        backend = _BACKEND
    elif backend == "compiled":
        if _BACKEND != "compiled":
            raise RuntimeError("compiled kernel not available")
        kern = _kernel
    elif backend == "python":
        kern = _kernel_py
    else:
        raise ValueError("backend must be 'compiled' or 'python'")

    chunks = [(lo, min(lo + CHUNK, trials)) for lo in range(0, trials, CHUNK)]

    def run(span):
        sums = np.zeros((4, nt))
        kern.run_chunk(
            int(seed) & (2**64 - 1),
            span[0],
            span[1],
            d,
            mv_sector,
            mv_a,
            mv_b,
            mv_m,
            mv_phase,
            rate_flat,
            n_v,
            n_p,
            times,
            cosw,
            sinw,
            sums,
        )
        return sums

    workers = max(1, int(os.environ.get("QTORIC_THREADS", "1")))
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run, chunks))
    else:
        partials = [run(span) for span in chunks]
    total = np.zeros((4, nt))
    for p in partials:  # fixed chunk order: deterministic reduction
        total += p

    n = float(trials)
    mean = (total[0] + 1j * total[1]) / n
    if trials > 1:
        var_re = np.maximum(total[2] - total[0] ** 2 / n, 0.0) / (n - 1.0)
        var_im = np.maximum(total[3] - total[1] ** 2 / n, 0.0) / (n - 1.0)
        stderr = np.sqrt((var_re + var_im) / n)
    else:
        stderr = np.zeros(nt)
    meta = {
        "engine": "mc",
        "d": d,
        "k": ci.lat.k,
        "beta": bath.beta,
        "rates": bath.describe()["rates"],
        "seed": int(seed),
        "trials": int(trials),
        "loop_len": ci.loop_x.length,
        "backend": backend,
    }
    return DecayCurve(times=times, values=mean, stderr=stderr, meta=meta)
