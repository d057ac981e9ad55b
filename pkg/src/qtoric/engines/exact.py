"""Exact Lindblad propagation of the full density operator (tiny systems).

Assembles the Schroedinger-picture generator as a sparse superoperator and
applies its exponential to vec(rho) with the scaled-and-squared action
algorithm (expm_multiply); generators are time-independent so no adaptive
stepping is needed.  The Hilbert dimension is capped: beyond it the
superoperator does not fit and callers are pointed at the reduced and Monte
Carlo engines.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from qtoric.code import CodeInstance
from qtoric.config import SizeCapError
from qtoric.davies import BathSpectrum, DaviesGenerator, build_generator
from qtoric.engines.curve import DecayCurve


def exact_curve(
    ci: CodeInstance,
    bath: BathSpectrum,
    times,
    include_hamiltonian: bool = True,
    generator: DaviesGenerator | None = None,
) -> DecayCurve:
    """Propagate rho(0) = |GS><GS| (X_c eigenvalue 1) and report Tr[X_c rho(t)].

    Setting include_hamiltonian=False propagates in the transformed picture;
    the expectations are identical because the initial state is an H
    eigenstate and the dissipator commutes with the free evolution.
    """
    dim = ci.dim
    if dim > ci.caps.superop_dim:
        raise SizeCapError(
            f"exact engine capped at Hilbert dimension {ci.caps.superop_dim} "
            f"(requested {dim}); use the reduced or MC engines"
        )
    times = np.asarray(times, dtype=float)
    gen = generator if generator is not None else build_generator(ci, bath)
    sop = gen.superoperator(include_hamiltonian=include_hamiltonian)
    psi = ci.ground_state_logical()
    rho = np.outer(psi, psi.conj())
    vec = rho.reshape(-1)
    xc = ci.logical_x_word().to_sparse(ci.n_edges)

    order = np.argsort(times)
    out = np.empty(len(times), dtype=complex)
    t_prev = 0.0
    for pos in order:
        t = times[pos]
        if t < 0:
            raise ValueError("times must be nonnegative")
        if t > t_prev:
            vec = spla.expm_multiply(sop * (t - t_prev), vec)
            t_prev = t
        rho_t = vec.reshape(dim, dim)
        out[pos] = np.trace(xc @ rho_t)
    meta = {
        "engine": "exact",
        "d": ci.d,
        "k": ci.lat.k,
        "beta": bath.beta,
        "rates": bath.describe()["rates"],
        "loop_len": ci.loop_x.length,
        "include_hamiltonian": include_hamiltonian,
    }
    return DecayCurve(times=times, values=out, stderr=None, meta=meta)


def dual_kernel_dimension(ci: CodeInstance, bath: BathSpectrum, n_check: int = 4) -> int:
    """Number of (near-)zero eigenvalues of the dual generator.

    Uses shift-inverted ARPACK on the sparse superoperator; feasible at the
    exact-engine sizes only.
    """
    gen = build_generator(ci, bath)
    sop = gen.superoperator(include_hamiltonian=True).tocsc()
    vals = spla.eigs(
        sop, k=n_check, sigma=1e-10, which="LM", return_eigenvectors=False
    )
    scale = max(1.0, float(np.abs(sop).max()))
    return int(np.sum(np.abs(vals) < 1e-8 * scale))
